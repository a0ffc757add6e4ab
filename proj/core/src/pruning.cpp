#include "maskprompt/pruning.hpp"

#include "maskprompt/error.hpp"

namespace maskprompt {

void PruneConfig::validate() const {
    if (min_area < 0 || min_extent < 0) {
        throw Error(ErrorKind::Config, "prune thresholds must be non-negative");
    }
}

bool is_retained(const ComponentStats& s, const PruneConfig& cfg) noexcept {
    return s.area >= cfg.min_area && s.bbox_w >= cfg.min_extent && s.bbox_h >= cfg.min_extent;
}

PruneResult prune(const LabelMap& labels, const std::vector<ComponentStats>& stats,
                  const PruneConfig& cfg) {
    cfg.validate();
    if (labels.labels.size() !=
        static_cast<std::size_t>(labels.width) * static_cast<std::size_t>(labels.height)) {
        throw Error(ErrorKind::InvariantViolation, "label map size does not match its dimensions");
    }

    // verdict[id]: 0 unknown, 1 retained, 2 removed
    std::vector<std::uint8_t> verdict(stats.size() + 1, 0);
    std::vector<std::int64_t> seen(stats.size() + 1, 0);
    PruneResult out;
    for (const auto& s : stats) {
        if (s.id < 1 || static_cast<std::size_t>(s.id) > stats.size() || verdict[static_cast<std::size_t>(s.id)] != 0) {
            throw Error(ErrorKind::InvariantViolation, "component stats ids are not dense 1..N");
        }
        const bool keep = is_retained(s, cfg);
        verdict[static_cast<std::size_t>(s.id)] = keep ? 1 : 2;
        (keep ? out.retained_ids : out.removed_ids).push_back(s.id);
    }

    std::vector<std::uint8_t> clean(labels.labels.size(), 0);
    std::vector<std::uint8_t> low(labels.labels.size(), 0);
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        const std::int32_t id = labels.labels[i];
        if (id == 0) continue;
        if (id < 0 || static_cast<std::size_t>(id) > stats.size()) {
            throw Error(ErrorKind::InvariantViolation,
                        "label " + std::to_string(id) + " has no component stats");
        }
        ++seen[static_cast<std::size_t>(id)];
        (verdict[static_cast<std::size_t>(id)] == 1 ? clean : low)[i] = 1;
    }
    for (const auto& s : stats) {
        if (seen[static_cast<std::size_t>(s.id)] != s.area) {
            throw Error(ErrorKind::InvariantViolation,
                        "component " + std::to_string(s.id) + " area disagrees with label map");
        }
    }
    out.clean_mask = Mask(labels.width, labels.height, std::move(clean));
    out.low_conf_mask = Mask(labels.width, labels.height, std::move(low));
    return out;
}

}  // namespace maskprompt
