#include "maskprompt/refiner.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>

#include "maskprompt/error.hpp"

namespace maskprompt {

void RefineConfig::validate() const {
    if (intensity_tolerance < 0 || intensity_tolerance > 255) {
        throw Error(ErrorKind::Config, "intensity_tolerance must be in [0, 255]");
    }
    if (negative_block_radius < 0) throw Error(ErrorKind::Config, "negative_block_radius must be >= 0");
    if (max_iterations < 0) throw Error(ErrorKind::Config, "max_iterations must be >= 0");
}

Mask blocked_pixels(int width, int height, const PromptSet& prompts, int radius) {
    Mask blocked(width, height);
    const int r2 = radius * radius;
    for (const auto& p : prompts.points) {
        if (p.label != PromptLabel::Negative) continue;
        for (int y = std::max(0, p.y - radius); y <= std::min(height - 1, p.y + radius); ++y) {
            for (int x = std::max(0, p.x - radius); x <= std::min(width - 1, p.x + radius); ++x) {
                const int dx = x - p.x;
                const int dy = y - p.y;
                if (dx * dx + dy * dy <= r2) blocked.set(x, y, true);
            }
        }
    }
    for (const auto& p : prompts.points) {
        if (p.label == PromptLabel::Positive) blocked.set(p.x, p.y, false);
    }
    return blocked;
}

Mask refine(const Raster& image, const PromptSet& prompts, const RefineConfig& cfg) {
    cfg.validate();
    const int w = image.width();
    const int h = image.height();
    if (prompts.width != w || prompts.height != h) {
        throw Error(ErrorKind::InvalidPrompt, "invalid prompt: prompt set is for a " + std::to_string(prompts.width) +
                                                  "x" + std::to_string(prompts.height) + " image, got " +
                                                  std::to_string(w) + "x" + std::to_string(h));
    }
    bool any_seed = false;
    for (const auto& p : prompts.points) {
        if (!image.contains(p.x, p.y)) {
            throw Error(ErrorKind::InvalidPrompt, "invalid prompt: (" + std::to_string(p.x) + ", " +
                                                      std::to_string(p.y) + ") is outside the image");
        }
        any_seed = any_seed || p.label == PromptLabel::Positive;
    }
    if (!any_seed) throw Error(ErrorKind::NoSeeds, "no seeds");

    const Mask blocked = blocked_pixels(w, h, prompts, cfg.negative_block_radius);
    const auto pixels = image.data();

    // Seeds sharing an intensity accept exactly the same pixels, so they
    // grow together as one multi-source flood.
    std::array<std::vector<std::size_t>, 256> seeds_by_level;
    for (const auto& p : prompts.points) {
        if (p.label == PromptLabel::Positive) seeds_by_level[image.at(p.x, p.y)].push_back(image.index(p.x, p.y));
    }

    static constexpr std::array<std::array<int, 2>, 8> kOffsets{{
        {{-1, 0}}, {{1, 0}}, {{0, -1}}, {{0, 1}}, {{-1, -1}}, {{1, -1}}, {{-1, 1}}, {{1, 1}}}};
    const std::size_t n_offsets = cfg.connectivity == Connectivity::Eight ? 8 : 4;

    Mask out(w, h);
    std::vector<std::uint32_t> visited(image.size(), 0);
    std::vector<std::size_t> frontier;
    std::vector<std::size_t> next;
    std::uint32_t stamp = 0;
    for (int level = 0; level < 256; ++level) {
        auto& seeds = seeds_by_level[static_cast<std::size_t>(level)];
        if (seeds.empty()) continue;
        ++stamp;
        const int lo = level - cfg.intensity_tolerance;
        const int hi = level + cfg.intensity_tolerance;
        frontier.clear();
        for (std::size_t s : seeds) {
            if (visited[s] == stamp) continue;
            visited[s] = stamp;
            out.set(s, true);
            frontier.push_back(s);
        }
        for (int ring = 0; !frontier.empty() && (cfg.max_iterations == 0 || ring < cfg.max_iterations); ++ring) {
            next.clear();
            for (std::size_t i : frontier) {
                const int x = static_cast<int>(i % static_cast<std::size_t>(w));
                const int y = static_cast<int>(i / static_cast<std::size_t>(w));
                for (std::size_t k = 0; k < n_offsets; ++k) {
                    const int nx = x + kOffsets[k][0];
                    const int ny = y + kOffsets[k][1];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const std::size_t j = image.index(nx, ny);
                    if (visited[j] == stamp || blocked[j]) continue;
                    const int v = pixels[j];
                    if (v < lo || v > hi) continue;
                    visited[j] = stamp;
                    out.set(j, true);
                    next.push_back(j);
                }
            }
            std::swap(frontier, next);
        }
    }
    return out;
}

}  // namespace maskprompt
