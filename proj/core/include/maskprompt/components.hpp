#pragma once

#include <cstdint>
#include <vector>

#include "maskprompt/raster.hpp"

namespace maskprompt {

enum class Connectivity { Four, Eight };

/// Per-pixel component ids: 0 is background, foreground ids are dense 1..N.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;

    std::int32_t at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
};

/// Geometry of one connected component. The bounding box is tight.
struct ComponentStats {
    std::int32_t id = 0;
    std::int64_t area = 0;
    int bbox_x = 0;
    int bbox_y = 0;
    int bbox_w = 0;
    int bbox_h = 0;

    friend bool operator==(const ComponentStats&, const ComponentStats&) = default;
};

struct Labeling {
    LabelMap labels;
    std::vector<ComponentStats> stats;  // sorted by id; stats[i].id == i + 1
};

// Two-pass union-find labeling. Ids follow the raster-scan order of each
// component's first pixel.
Labeling label_components(const Mask& mask, Connectivity connectivity = Connectivity::Eight);

/// Foreground mask of a single component id.
Mask component_mask(const LabelMap& labels, std::int32_t id);

}  // namespace maskprompt
