#include "maskprompt/components.hpp"

#include <algorithm>
#include <numeric>

namespace maskprompt {
namespace {

class DisjointSet {
public:
    std::int32_t make() {
        parent_.push_back(static_cast<std::int32_t>(parent_.size()));
        return parent_.back();
    }

    std::int32_t find(std::int32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // Smaller provisional label wins so roots stay stable.
        if (a < b) parent_[b] = a; else parent_[a] = b;
    }

private:
    std::vector<std::int32_t> parent_;
};

}  // namespace

Labeling label_components(const Mask& mask, Connectivity connectivity) {
    const int w = mask.width();
    const int h = mask.height();
    const bool eight = connectivity == Connectivity::Eight;

    Labeling out;
    out.labels.width = w;
    out.labels.height = h;
    out.labels.labels.assign(mask.size(), 0);
    auto& lab = out.labels.labels;

    // Provisional label 0 is reserved for background.
    DisjointSet sets;
    sets.make();

    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * static_cast<std::size_t>(w);
        const std::size_t up = row - static_cast<std::size_t>(w);
        for (int x = 0; x < w; ++x) {
            const std::size_t i = row + static_cast<std::size_t>(x);
            if (!mask[i]) continue;

            std::int32_t current = 0;
            auto join = [&](std::int32_t neighbor) {
                if (neighbor == 0) return;
                if (current == 0) current = neighbor; else sets.unite(current, neighbor);
            };
            if (x > 0) join(lab[i - 1]);
            if (y > 0) {
                join(lab[up + static_cast<std::size_t>(x)]);
                if (eight) {
                    if (x > 0) join(lab[up + static_cast<std::size_t>(x) - 1]);
                    if (x + 1 < w) join(lab[up + static_cast<std::size_t>(x) + 1]);
                }
            }
            lab[i] = current != 0 ? current : sets.make();
        }
    }

    // Second pass: resolve roots to dense ids in first-seen raster order and
    // accumulate geometry.
    std::vector<std::int32_t> dense;
    auto& stats = out.stats;
    std::vector<int> max_x;
    std::vector<int> max_y;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = mask.index(x, y);
            if (lab[i] == 0) continue;
            const std::int32_t root = sets.find(lab[i]);
            if (static_cast<std::size_t>(root) >= dense.size()) dense.resize(static_cast<std::size_t>(root) + 1, 0);
            std::int32_t& id = dense[static_cast<std::size_t>(root)];
            if (id == 0) {
                id = static_cast<std::int32_t>(stats.size()) + 1;
                stats.push_back({id, 0, x, y, 0, 0});
                max_x.push_back(x);
                max_y.push_back(y);
            }
            lab[i] = id;
            const std::size_t k = static_cast<std::size_t>(id) - 1;
            auto& s = stats[k];
            ++s.area;
            s.bbox_x = std::min(s.bbox_x, x);
            max_x[k] = std::max(max_x[k], x);
            max_y[k] = std::max(max_y[k], y);
        }
    }
    for (std::size_t k = 0; k < stats.size(); ++k) {
        stats[k].bbox_w = max_x[k] - stats[k].bbox_x + 1;
        stats[k].bbox_h = max_y[k] - stats[k].bbox_y + 1;
    }
    return out;
}

Mask component_mask(const LabelMap& labels, std::int32_t id) {
    std::vector<std::uint8_t> data(labels.labels.size());
    std::transform(labels.labels.begin(), labels.labels.end(), data.begin(),
                   [id](std::int32_t v) -> std::uint8_t { return v == id ? 1 : 0; });
    return Mask(labels.width, labels.height, std::move(data));
}

}  // namespace maskprompt
