#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "maskprompt/raster.hpp"

namespace maskprompt {

/// Exact squared Euclidean distances, one per pixel, row-major.
struct DistanceField {
    static constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max();

    int width = 0;
    int height = 0;
    std::vector<std::int64_t> squared;

    std::int64_t squared_at(int x, int y) const {
        return squared[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                       static_cast<std::size_t>(x)];
    }
    double at(int x, int y) const { return std::sqrt(static_cast<double>(squared_at(x, y))); }
};

// Distance from every foreground pixel to the nearest background pixel, with
// the outside of the image counting as background. Background maps to 0.
DistanceField distance_transform(const Mask& mask);

// Distance from every pixel to the nearest set pixel of `features` (the
// image border is not a feature). kUnreachable when `features` is empty.
DistanceField distance_to(const Mask& features);

}  // namespace maskprompt
