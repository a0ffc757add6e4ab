#pragma once

#include <cstdint>
#include <vector>

#include "maskprompt/components.hpp"
#include "maskprompt/raster.hpp"

namespace maskprompt {

/// Morphology-aware pruning thresholds. Removal is strict: a component is
/// dropped when area < min_area, or when either bbox side < min_extent.
struct PruneConfig {
    std::int64_t min_area = 1000;
    int min_extent = 275;

    void validate() const;
};

struct PruneResult {
    Mask clean_mask;     // retained components
    Mask low_conf_mask;  // removed components
    std::vector<std::int32_t> retained_ids;
    std::vector<std::int32_t> removed_ids;
};

bool is_retained(const ComponentStats& stats, const PruneConfig& cfg) noexcept;

/// Throws InvariantViolation when labels and stats disagree.
PruneResult prune(const LabelMap& labels, const std::vector<ComponentStats>& stats,
                  const PruneConfig& cfg = {});

}  // namespace maskprompt
