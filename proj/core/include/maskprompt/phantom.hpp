#pragma once

#include <cstdint>
#include <string>

#include "maskprompt/raster.hpp"

namespace maskprompt {

/// Parameters of a synthetic ribbon phantom. Identical specs give identical
/// phantoms on every platform: geometry is integer-only and the generator is
/// std::mt19937_64 with hand-rolled range reduction.
struct PhantomSpec {
    int width = 512;
    int height = 512;
    int ribbon_count = 3;
    int ribbon_thickness = 12;
    int noise_blob_count = 12;
    std::int64_t noise_blob_max_area = 999;  // blobs are strictly smaller
    int coarse_erosion = 2;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct Phantom {
    Raster image;
    Mask gt_mask;
    Mask coarse_mask;
    Mask blob_mask;  // the injected noise blobs alone (subset of coarse_mask)
};

// Ribbons are random-walk centerlines with bounded turning, dilated to the
// configured thickness, each spanning at least 60% of the shorter canvas side
// in both directions. The coarse mask erodes the ground truth by
// coarse_erosion, restores random boundary bumps (clipped to the ribbons)
// when coarse_erosion > 0, and injects
// elliptical noise blobs well clear of everything else.
// Throws PhantomDoesNotFit when ribbons or blobs cannot be placed.
Phantom generate_phantom(const PhantomSpec& spec);

std::string to_json(const PhantomSpec& spec);
PhantomSpec phantom_spec_from_json(const std::string& text);

}  // namespace maskprompt
