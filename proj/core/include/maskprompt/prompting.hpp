#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "maskprompt/components.hpp"
#include "maskprompt/raster.hpp"

namespace maskprompt {

enum class PromptLabel : std::uint8_t { Negative = 0, Positive = 1 };

struct PointPrompt {
    int x = 0;
    int y = 0;
    PromptLabel label = PromptLabel::Positive;

    friend bool operator==(const PointPrompt&, const PointPrompt&) = default;
};

enum class NegativeSource { BackgroundMargin, LowConfidence, Both };

std::string_view to_string(NegativeSource source) noexcept;
NegativeSource parse_negative_source(std::string_view text);

struct PromptConfig {
    int n_positive = 20;
    int n_negative = 20;
    NegativeSource negative_source = NegativeSource::Both;
    int margin_radius = 5;
    // Allocation (proportional by area, largest remainder) and tie-breaking
    // (lowest row-major index) are fixed rules and have no knobs.

    void validate() const;
    /// Canonical text form; the digest is computed over it.
    std::string canonical() const;
    /// 16 hex digits, FNV-1a 64 of canonical().
    std::string digest() const;
};

struct PromptSet {
    std::string source_image;
    int width = 0;
    int height = 0;
    std::vector<PointPrompt> points;  // positives first, each in selection order
    int n_positive = 0;
    int n_negative = 0;
    std::string config_digest;
    bool truncated = false;  // fewer points than requested
    std::vector<std::string> warnings;
};

/// Which prompt population a region feeds; carried by sampling errors.
enum class PromptRole { Positive, Negative };

/// A set of pixels of a width x height image, as sorted row-major indices.
struct Region {
    int width = 0;
    int height = 0;
    std::vector<std::size_t> pixels;

    static Region from_mask(const Mask& mask);
};

struct SampleResult {
    std::vector<Point> points;
    bool truncated = false;
};

// Greedy farthest-point sampling. The first point is the pixel deepest inside
// the region (maximal distance transform); each later point maximizes its
// minimum distance to the points already chosen. Ties go to the lowest
// row-major index. k > |region| returns every pixel and sets `truncated`.
// Throws EmptySamplingRegion when the region is empty and k > 0.
SampleResult farthest_point_sample(const Region& region, std::size_t k, PromptRole role);
SampleResult farthest_point_sample(const Mask& region, std::size_t k, PromptRole role);

// Splits `total` across components proportionally to area with
// largest-remainder rounding; every component receives at least one point
// while quota remains, and no component receives more points than pixels.
// Leftover quota that fits nowhere is dropped (the caller flags truncation).
std::vector<std::int64_t> allocate_quota(std::int64_t total, const std::vector<ComponentStats>& components);

/// Pixels eligible for negative prompts under `cfg`.
Mask negative_region(const Mask& clean, const Mask& low_conf, const PromptConfig& cfg);

// Throws NoPositiveRegion / NoNegativeRegion when a requested population has
// nowhere to come from; DimensionMismatch / InvalidArgument on bad inputs.
PromptSet generate_prompts(const Mask& clean, const Mask& low_conf, const std::string& image_id,
                           const PromptConfig& cfg = {},
                           Connectivity connectivity = Connectivity::Eight);

/// Canonical JSON serialization; keys in fixed order, trailing newline.
std::string to_json(const PromptSet& prompts);
/// Parses and validates; throws Schema on any violation.
PromptSet prompt_set_from_json(std::string_view text);
PromptSet load_prompt_set(const std::string& path);
void save_prompt_set(const PromptSet& prompts, const std::string& path);

}  // namespace maskprompt
