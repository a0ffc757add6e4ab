#pragma once

#include "maskprompt/components.hpp"
#include "maskprompt/prompting.hpp"
#include "maskprompt/raster.hpp"

namespace maskprompt {

/// Deterministic stand-in for a promptable segmenter.
struct RefineConfig {
    int intensity_tolerance = 25;
    int negative_block_radius = 10;
    Connectivity connectivity = Connectivity::Eight;
    int max_iterations = 0;  // growth rings per seed; 0 grows to the fixpoint

    void validate() const;
};

// Pixels within negative_block_radius of any negative prompt. Positive prompt
// pixels are never blocked: a seed always survives, even inside a disk.
Mask blocked_pixels(int width, int height, const PromptSet& prompts, int radius);

// Union over positive prompts of the region grown from each seed through
// pixels whose intensity differs from the seed's by at most the tolerance,
// never entering a blocked pixel.
// Throws NoSeeds without positive prompts; InvalidPrompt when a prompt lies
// outside the image or the prompt set was made for other dimensions.
Mask refine(const Raster& image, const PromptSet& prompts, const RefineConfig& cfg = {});

}  // namespace maskprompt
