#include "maskprompt/prompting.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "maskprompt/distance.hpp"
#include "maskprompt/error.hpp"

namespace maskprompt {

std::string_view to_string(NegativeSource source) noexcept {
    switch (source) {
        case NegativeSource::BackgroundMargin: return "background_margin";
        case NegativeSource::LowConfidence: return "low_confidence";
        case NegativeSource::Both: return "both";
    }
    return "both";
}

NegativeSource parse_negative_source(std::string_view text) {
    if (text == "background_margin") return NegativeSource::BackgroundMargin;
    if (text == "low_confidence") return NegativeSource::LowConfidence;
    if (text == "both") return NegativeSource::Both;
    throw Error(ErrorKind::Config, "unknown negative_source '" + std::string(text) +
                                       "' (expected background_margin, low_confidence or both)");
}

void PromptConfig::validate() const {
    if (n_positive < 0 || n_negative < 0) throw Error(ErrorKind::Config, "prompt counts must be non-negative");
    if (margin_radius < 0) throw Error(ErrorKind::Config, "margin_radius must be non-negative");
}

std::string PromptConfig::canonical() const {
    return "n_positive=" + std::to_string(n_positive) + ";n_negative=" + std::to_string(n_negative) +
           ";negative_source=" + std::string(to_string(negative_source)) +
           ";margin_radius=" + std::to_string(margin_radius) +
           ";allocation=proportional_by_area;tie_break=row_major";
}

std::string PromptConfig::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Region Region::from_mask(const Mask& mask) {
    Region r{mask.width(), mask.height(), {}};
    r.pixels.reserve(mask.count());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) r.pixels.push_back(i);
    }
    return r;
}

namespace {

std::string_view role_name(PromptRole role) {
    return role == PromptRole::Positive ? "positive" : "negative";
}

// Greedy farthest-point sampling inside a bounding-box crop of the region.
// Crop row-major order is global row-major order, so ties on crop index are
// ties on image index. The crop's distance field (the crop border is
// outside the region, so treating it as background is exact) first gives
// the seed and is then reused as the nearest-selected distance of each
// pixel, -1 marking pixels outside the region.
SampleResult sample_crop(const Mask& crop, int x0, int y0, std::size_t n, std::size_t k) {
    SampleResult out;
    out.truncated = k > n;
    const std::size_t take = std::min(k, n);
    out.points.reserve(take);
    const int cw = crop.width();
    const int ch = crop.height();
    const std::size_t ucw = static_cast<std::size_t>(cw);

    std::vector<std::int64_t> nearest = distance_transform(crop).squared;
    // Seed: deepest pixel; a strict '>' scan keeps the lowest index on ties.
    std::size_t chosen = 0;
    for (std::size_t i = 1; i < nearest.size(); ++i) {
        if (nearest[i] > nearest[chosen]) chosen = i;
    }
    for (std::size_t i = 0; i < nearest.size(); ++i) {
        nearest[i] = crop[i] ? DistanceField::kUnreachable : -1;
    }

    // Square tiles. A tile whose box is no closer to the new point than its
    // current largest nearest-distance cannot change and is skipped.
    constexpr int kTile = 16;
    struct Tile {
        int bx0, by0, bx1, by1;
        std::int64_t best = DistanceField::kUnreachable;
        std::size_t best_index = 0;
    };
    std::vector<Tile> tiles;
    for (int ty = 0; ty < ch; ty += kTile) {
        for (int tx = 0; tx < cw; tx += kTile) {
            Tile tile{tx, ty, std::min(cw, tx + kTile) - 1, std::min(ch, ty + kTile) - 1};
            bool any = false;
            for (int y = tile.by0; y <= tile.by1 && !any; ++y) {
                for (int x = tile.bx0; x <= tile.bx1; ++x) {
                    const std::size_t i = static_cast<std::size_t>(y) * ucw + static_cast<std::size_t>(x);
                    if (crop[i]) {
                        tile.best_index = i;
                        any = true;
                        break;
                    }
                }
            }
            if (any) tiles.push_back(tile);
        }
    }

    for (std::size_t step = 0; step < take; ++step) {
        const int px = static_cast<int>(chosen % ucw);
        const int py = static_cast<int>(chosen / ucw);
        out.points.push_back({px + x0, py + y0});
        if (step + 1 == take) break;

        std::int64_t next_d = -1;
        std::size_t next_index = 0;
        for (Tile& tile : tiles) {
            const std::int64_t gx = std::max({0, tile.bx0 - px, px - tile.bx1});
            const std::int64_t gy = std::max({0, tile.by0 - py, py - tile.by1});
            if (gx * gx + gy * gy < tile.best) {
                std::int64_t best = -1;
                std::size_t best_index = 0;
                for (int y = tile.by0; y <= tile.by1; ++y) {
                    const std::int64_t dy = y - py;
                    const std::size_t row = static_cast<std::size_t>(y) * ucw;
                    for (int x = tile.bx0; x <= tile.bx1; ++x) {
                        const std::int64_t dx = x - px;
                        std::int64_t& slot = nearest[row + static_cast<std::size_t>(x)];
                        const std::int64_t d = std::min(slot, dx * dx + dy * dy);
                        slot = d;
                        if (d > best) {
                            best = d;
                            best_index = row + static_cast<std::size_t>(x);
                        }
                    }
                }
                tile.best = best;
                tile.best_index = best_index;
            }
            if (tile.best > next_d || (tile.best == next_d && tile.best_index < next_index)) {
                next_d = tile.best;
                next_index = tile.best_index;
            }
        }
        chosen = next_index;
    }
    return out;
}

void check_sampling_region(std::size_t n, PromptRole role) {
    if (n == 0) {
        throw Error(ErrorKind::EmptySamplingRegion, "empty sampling region (" + std::string(role_name(role)) + ")");
    }
}

}  // namespace

SampleResult farthest_point_sample(const Region& region, std::size_t k, PromptRole role) {
    if (k == 0) return {};
    check_sampling_region(region.pixels.size(), role);
    // Pixels are sorted row-major, so rows come in order and the bounding box
    // needs no per-pixel division.
    const std::size_t w = static_cast<std::size_t>(region.width);
    const int y0 = static_cast<int>(region.pixels.front() / w);
    const int y1 = static_cast<int>(region.pixels.back() / w);
    int x0 = region.width, x1 = -1;
    std::size_t row_start = static_cast<std::size_t>(y0) * w;
    for (std::size_t i : region.pixels) {
        while (i >= row_start + w) row_start += w;
        const int x = static_cast<int>(i - row_start);
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
    }
    Mask crop(x1 - x0 + 1, y1 - y0 + 1);
    int y = y0;
    row_start = static_cast<std::size_t>(y0) * w;
    for (std::size_t i : region.pixels) {
        while (i >= row_start + w) {
            row_start += w;
            ++y;
        }
        crop.set(static_cast<int>(i - row_start) - x0, y - y0, true);
    }
    return sample_crop(crop, x0, y0, region.pixels.size(), k);
}

SampleResult farthest_point_sample(const Mask& region, std::size_t k, PromptRole role) {
    if (k == 0) return {};
    const int w = region.width();
    const int h = region.height();
    int x0 = w, y0 = h, x1 = -1, y1 = -1;
    std::size_t n = 0;
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * static_cast<std::size_t>(w);
        for (int x = 0; x < w; ++x) {
            if (!region[row + static_cast<std::size_t>(x)]) continue;
            ++n;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    check_sampling_region(n, role);
    Mask crop(x1 - x0 + 1, y1 - y0 + 1);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (region.at(x, y)) crop.set(x - x0, y - y0, true);
        }
    }
    return sample_crop(crop, x0, y0, n, k);
}

std::vector<std::int64_t> allocate_quota(std::int64_t total, const std::vector<ComponentStats>& components) {
    const std::size_t c = components.size();
    std::vector<std::int64_t> quota(c, 0);
    if (total <= 0 || c == 0) return quota;

    // Larger area first, then lower id.
    std::vector<std::size_t> by_area(c);
    std::iota(by_area.begin(), by_area.end(), std::size_t{0});
    std::stable_sort(by_area.begin(), by_area.end(), [&](std::size_t a, std::size_t b) {
        if (components[a].area != components[b].area) return components[a].area > components[b].area;
        return components[a].id < components[b].id;
    });

    if (static_cast<std::size_t>(total) < c) {
        for (std::size_t r = 0; r < static_cast<std::size_t>(total); ++r) quota[by_area[r]] = 1;
        return quota;
    }

    std::int64_t area_sum = 0;
    for (const auto& s : components) area_sum += s.area;
    std::vector<std::int64_t> remainder(c);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < c; ++i) {
        // total * area fits easily: both are bounded by the pixel count.
        const std::int64_t scaled = total * components[i].area;
        quota[i] = scaled / area_sum;
        remainder[i] = scaled % area_sum;
        assigned += quota[i];
    }
    std::vector<std::size_t> by_remainder = by_area;
    std::stable_sort(by_remainder.begin(), by_remainder.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t r = 0; assigned < total; ++r, ++assigned) ++quota[by_remainder[r % c]];

    // Floor of one point per component, taken from the largest quota.
    for (std::size_t i : by_area) {
        if (quota[i] != 0) continue;
        std::size_t donor = by_area.front();
        for (std::size_t j : by_area) {
            if (quota[j] > quota[donor]) donor = j;
        }
        --quota[donor];
        quota[i] = 1;
    }

    // Cap at component size and hand the excess to components with room.
    std::int64_t excess = 0;
    for (std::size_t i = 0; i < c; ++i) {
        if (quota[i] > components[i].area) {
            excess += quota[i] - components[i].area;
            quota[i] = components[i].area;
        }
    }
    for (std::size_t i : by_area) {
        if (excess == 0) break;
        const std::int64_t room = components[i].area - quota[i];
        const std::int64_t give = std::min(room, excess);
        quota[i] += give;
        excess -= give;
    }
    return quota;
}

// Pixels within Euclidean distance r of `mask`, the mask included. The
// nearest mask pixel to any outside pixel has a 4-neighbour outside the mask
// (otherwise stepping toward the query would be closer), so stamping disks
// on boundary pixels is exact. Large radii fall back to a full transform.
Mask within_radius(const Mask& mask, int r) {
    const int w = mask.width();
    const int h = mask.height();
    const std::int64_t r2 = static_cast<std::int64_t>(r) * r;
    std::vector<std::size_t> boundary;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
            if (!mask[i]) continue;
            if ((x > 0 && !mask[i - 1]) || (x + 1 < w && !mask[i + 1]) ||
                (y > 0 && !mask[i - static_cast<std::size_t>(w)]) ||
                (y + 1 < h && !mask[i + static_cast<std::size_t>(w)])) {
                boundary.push_back(i);
            }
        }
    }
    Mask out = mask;
    const std::int64_t disk = (2 * static_cast<std::int64_t>(r) + 1) * (2 * static_cast<std::int64_t>(r) + 1);
    if (static_cast<std::int64_t>(boundary.size()) * disk > static_cast<std::int64_t>(mask.size())) {
        const DistanceField field = distance_to(mask);
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (field.squared[i] <= r2) out.set(i, true);
        }
        return out;
    }
    std::vector<std::pair<int, int>> offsets;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            if (static_cast<std::int64_t>(dx) * dx + static_cast<std::int64_t>(dy) * dy <= r2) offsets.emplace_back(dx, dy);
        }
    }
    for (std::size_t i : boundary) {
        const int bx = static_cast<int>(i % static_cast<std::size_t>(w));
        const int by = static_cast<int>(i / static_cast<std::size_t>(w));
        for (const auto& [dx, dy] : offsets) {
            const int x = bx + dx;
            const int y = by + dy;
            if (x >= 0 && x < w && y >= 0 && y < h) {
                out.set(static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x), true);
            }
        }
    }
    return out;
}

Mask negative_region(const Mask& clean, const Mask& low_conf, const PromptConfig& cfg) {
    if (!clean.same_shape(low_conf)) {
        throw Error(ErrorKind::DimensionMismatch, "clean and low-confidence masks differ in size");
    }
    Mask out(clean.width(), clean.height());
    const bool use_background = cfg.negative_source != NegativeSource::LowConfidence;
    const bool use_low = cfg.negative_source != NegativeSource::BackgroundMargin;
    if (use_background) {
        const Mask near = within_radius(clean, cfg.margin_radius);
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (!near[i] && !low_conf[i]) out.set(i, true);
        }
    }
    if (use_low) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (low_conf[i]) out.set(i, true);
        }
    }
    return out;
}

PromptSet generate_prompts(const Mask& clean, const Mask& low_conf, const std::string& image_id,
                           const PromptConfig& cfg, Connectivity connectivity) {
    cfg.validate();
    if (!clean.same_shape(low_conf)) {
        throw Error(ErrorKind::DimensionMismatch, "clean and low-confidence masks differ in size");
    }
    for (std::size_t i = 0; i < clean.size(); ++i) {
        if (clean[i] && low_conf[i]) {
            throw Error(ErrorKind::InvalidArgument, "clean and low-confidence masks overlap");
        }
    }

    PromptSet out;
    out.source_image = image_id;
    out.width = clean.width();
    out.height = clean.height();
    out.config_digest = cfg.digest();

    if (cfg.n_positive > 0) {
        const Labeling labeling = label_components(clean, connectivity);
        if (labeling.stats.empty()) {
            throw Error(ErrorKind::NoPositiveRegion, "no positive region");
        }
        std::vector<Region> regions(labeling.stats.size(), Region{clean.width(), clean.height(), {}});
        for (std::size_t k = 0; k < labeling.stats.size(); ++k) {
            regions[k].pixels.reserve(static_cast<std::size_t>(labeling.stats[k].area));
        }
        for (std::size_t i = 0; i < clean.size(); ++i) {
            const std::int32_t id = labeling.labels.labels[i];
            if (id != 0) regions[static_cast<std::size_t>(id) - 1].pixels.push_back(i);
        }
        const auto quota = allocate_quota(cfg.n_positive, labeling.stats);
        for (std::size_t k = 0; k < regions.size(); ++k) {
            const auto sample = farthest_point_sample(regions[k], static_cast<std::size_t>(quota[k]),
                                                      PromptRole::Positive);
            for (const Point& p : sample.points) out.points.push_back({p.x, p.y, PromptLabel::Positive});
        }
        out.n_positive = static_cast<int>(out.points.size());
        if (out.n_positive < cfg.n_positive) {
            out.truncated = true;
            out.warnings.push_back("positive prompts truncated: " + std::to_string(out.n_positive) + " of " +
                                   std::to_string(cfg.n_positive) + " (clean region too small)");
        }
    }

    if (cfg.n_negative > 0) {
        const Mask region = negative_region(clean, low_conf, cfg);
        if (!region.any()) {
            throw Error(ErrorKind::NoNegativeRegion, "no negative region");
        }
        const auto sample = farthest_point_sample(region, static_cast<std::size_t>(cfg.n_negative),
                                                  PromptRole::Negative);
        for (const Point& p : sample.points) out.points.push_back({p.x, p.y, PromptLabel::Negative});
        out.n_negative = static_cast<int>(sample.points.size());
        if (sample.truncated) {
            out.truncated = true;
            out.warnings.push_back("negative prompts truncated: " + std::to_string(out.n_negative) + " of " +
                                   std::to_string(cfg.n_negative) + " (negative region too small)");
        }
    }
    return out;
}

}  // namespace maskprompt
