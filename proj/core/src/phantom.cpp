#include "maskprompt/phantom.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include <json.hpp>

#include "maskprompt/components.hpp"
#include "maskprompt/distance.hpp"
#include "maskprompt/error.hpp"

namespace maskprompt {
namespace {

// Unit headings scaled by 1024, 32 directions.
constexpr std::array<std::array<int, 2>, 32> kHeading{{
    {{1024, 0}}, {{1004, 200}}, {{946, 392}}, {{851, 569}}, {{724, 724}}, {{569, 851}}, {{392, 946}},
    {{200, 1004}}, {{0, 1024}}, {{-200, 1004}}, {{-392, 946}}, {{-569, 851}}, {{-724, 724}},
    {{-851, 569}}, {{-946, 392}}, {{-1004, 200}}, {{-1024, 0}}, {{-1004, -200}}, {{-946, -392}},
    {{-851, -569}}, {{-724, -724}}, {{-569, -851}}, {{-392, -946}}, {{-200, -1004}}, {{0, -1024}},
    {{200, -1004}}, {{392, -946}}, {{569, -851}}, {{724, -724}}, {{851, -569}}, {{946, -392}},
    {{1004, -200}}}};

constexpr int kFixedShift = 10;
constexpr int kStepPx = 2;
constexpr int kMinStepsBetweenTurns = 6;
constexpr int kRibbonAttempts = 200;
constexpr int kRibbonSetAttempts = 20;
constexpr int kBlobAttempts = 2000;
constexpr int kBlobClearance = 16;
constexpr int kBackgroundLevel = 60;
constexpr int kRibbonLevel = 170;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform integer in [lo, hi] by rejection; no std distributions, whose
    // output is implementation-defined.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return lo + static_cast<std::int64_t>(v % span);
    }

    bool chance(int numerator, int denominator) { return uniform(0, denominator - 1) < numerator; }

private:
    std::mt19937_64 engine_;
};

int to_pixel(std::int64_t fixed) {
    return static_cast<int>((fixed + (1 << (kFixedShift - 1))) >> kFixedShift);
}

// One direction of the walk from (fx, fy) until the centerline leaves the
// canvas.
std::vector<Point> walk(Rng& rng, std::int64_t fx, std::int64_t fy, int heading, int w, int h) {
    std::vector<Point> pts;
    const int base = heading;
    int since_turn = 0;
    const std::size_t max_steps = static_cast<std::size_t>(4 * (w + h));
    while (pts.size() < max_steps) {
        fx += static_cast<std::int64_t>(kHeading[static_cast<std::size_t>(heading)][0]) * kStepPx;
        fy += static_cast<std::int64_t>(kHeading[static_cast<std::size_t>(heading)][1]) * kStepPx;
        const Point p{to_pixel(fx), to_pixel(fy)};
        if (p.x < 0 || p.y < 0 || p.x >= w || p.y >= h) break;
        pts.push_back(p);
        if (++since_turn >= kMinStepsBetweenTurns && rng.chance(1, 3)) {
            // Turns revert toward the base heading, bounding total drift.
            const int drift = (heading - base + 48) % 32 - 16;
            const int turn = drift >= 2 ? -1 : drift <= -2 ? 1 : (rng.chance(1, 2) ? 1 : -1);
            heading = (heading + turn + 32) % 32;
            since_turn = 0;
        }
    }
    return pts;
}

void stamp_disk(Mask& mask, Point c, int diameter) {
    const int r = diameter / 2 + 1;
    const int d2 = diameter * diameter;
    for (int y = c.y - r; y <= c.y + r; ++y) {
        for (int x = c.x - r; x <= c.x + r; ++x) {
            if (!mask.contains(x, y)) continue;
            const int dx = 2 * (x - c.x);
            const int dy = 2 * (y - c.y);
            if (dx * dx + dy * dy <= d2) mask.set(x, y, true);
        }
    }
}

std::vector<Point> ribbon_centerline(Rng& rng, const PhantomSpec& spec, int family) {
    const int w = spec.width;
    const int h = spec.height;
    const int min_span = std::min(w, h) * 3 / 5;
    for (int attempt = 0; attempt < kRibbonAttempts; ++attempt) {
        const std::int64_t sx = rng.uniform(w / 8, 7 * w / 8) << kFixedShift;
        const std::int64_t sy = rng.uniform(h / 8, 7 * h / 8) << kFixedShift;
        const int heading = static_cast<int>((family + 32 + rng.uniform(-1, 1)) % 32);
        auto back = walk(rng, sx, sy, (heading + 16) % 32, w, h);
        auto fwd = walk(rng, sx, sy, heading, w, h);
        std::reverse(back.begin(), back.end());
        back.push_back({to_pixel(sx), to_pixel(sy)});
        back.insert(back.end(), fwd.begin(), fwd.end());

        int x0 = w, y0 = h, x1 = -1, y1 = -1;
        for (const Point& p : back) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
        if (x1 - x0 + 1 >= min_span && y1 - y0 + 1 >= min_span) return back;
    }
    throw Error(ErrorKind::PhantomDoesNotFit, "ribbons cannot fit: no centerline spans the canvas");
}

std::vector<Point> blob_pixels(Point c, int a, int b) {
    std::vector<Point> px;
    const std::int64_t a2 = static_cast<std::int64_t>(a) * a;
    const std::int64_t b2 = static_cast<std::int64_t>(b) * b;
    for (int dy = -b; dy <= b; ++dy) {
        for (int dx = -a; dx <= a; ++dx) {
            if (dx * dx * b2 + dy * dy * a2 <= a2 * b2) px.push_back({c.x + dx, c.y + dy});
        }
    }
    return px;
}

}  // namespace

void PhantomSpec::validate() const {
    if (width < 1 || height < 1) throw Error(ErrorKind::InvalidArgument, "phantom canvas must be non-empty");
    if (ribbon_count < 0 || noise_blob_count < 0 || coarse_erosion < 0) {
        throw Error(ErrorKind::InvalidArgument, "phantom counts must be non-negative");
    }
    if (ribbon_thickness < 1) throw Error(ErrorKind::InvalidArgument, "ribbon_thickness must be >= 1");
    if (noise_blob_count > 0 && noise_blob_max_area < 2) {
        throw Error(ErrorKind::InvalidArgument, "noise_blob_max_area must be >= 2");
    }
    if (ribbon_count > 0 && ribbon_thickness * 4 > std::min(width, height)) {
        throw Error(ErrorKind::PhantomDoesNotFit, "ribbons cannot fit: thickness exceeds a quarter of the canvas");
    }
    if (ribbon_count > 0 && 2 * coarse_erosion >= ribbon_thickness) {
        throw Error(ErrorKind::PhantomDoesNotFit, "ribbons cannot fit: erosion would erase them");
    }
}

Phantom generate_phantom(const PhantomSpec& spec) {
    spec.validate();
    const int w = spec.width;
    const int h = spec.height;
    Rng rng(spec.rng_seed);

    Phantom out;
    // Ribbons stay apart so each one is its own component; a set that cannot
    // be completed is discarded and redrawn.
    const std::int64_t gap = static_cast<std::int64_t>(spec.ribbon_thickness) + 8;
    bool complete = false;
    for (int set_attempt = 0; set_attempt < kRibbonSetAttempts && !complete; ++set_attempt) {
        out.gt_mask = Mask(w, h);
        // Ribbons of one phantom share a diagonal family and run roughly parallel.
        const int family = rng.chance(1, 2) ? 4 : 12;
        complete = true;
        for (int r = 0; r < spec.ribbon_count && complete; ++r) {
            const DistanceField clearance = distance_to(out.gt_mask);
            bool placed = false;
            for (int attempt = 0; attempt < kRibbonAttempts && !placed; ++attempt) {
                const auto line = ribbon_centerline(rng, spec, family);
                placed = std::all_of(line.begin(), line.end(), [&](const Point& p) {
                    return clearance.squared_at(p.x, p.y) > gap * gap;
                });
                if (placed) {
                    for (const Point& p : line) stamp_disk(out.gt_mask, p, spec.ribbon_thickness);
                }
            }
            complete = placed;
        }
    }
    if (!complete) throw Error(ErrorKind::PhantomDoesNotFit, "ribbons cannot fit without touching each other");

    out.image = Raster(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int v;
            if (out.gt_mask.at(x, y)) {
                v = kRibbonLevel + static_cast<int>(rng.uniform(-8, 8));
            } else {
                v = kBackgroundLevel + (20 * x) / w + (10 * y) / h + static_cast<int>(rng.uniform(-15, 15));
            }
            out.image.set(x, y, static_cast<std::uint8_t>(std::clamp(v, 0, 255)));
        }
    }

    // Boundary erosion, partly undone by random bumps along the boundary.
    out.coarse_mask = Mask(w, h);
    const std::int64_t e2 = static_cast<std::int64_t>(spec.coarse_erosion) * spec.coarse_erosion;
    const DistanceField depth = distance_transform(out.gt_mask);
    std::vector<Point> boundary;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int64_t d = depth.squared_at(x, y);
            if (d > e2) out.coarse_mask.set(x, y, true);
            if (d == 1) boundary.push_back({x, y});
        }
    }
    if (spec.coarse_erosion > 0 && !boundary.empty()) {
        Mask bumps_mask(w, h);
        const int bumps = 8 * spec.ribbon_count;
        for (int i = 0; i < bumps; ++i) {
            const Point c = boundary[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(boundary.size()) - 1))];
            stamp_disk(bumps_mask, c, 2 * spec.coarse_erosion + 4);
        }
        // Bumps restore eroded boundary but never overshoot the ribbon.
        for (std::size_t i = 0; i < bumps_mask.size(); ++i) {
            if (bumps_mask[i] && out.gt_mask[i]) out.coarse_mask.set(i, true);
        }
    }

    out.blob_mask = Mask(w, h);
    if (spec.noise_blob_count > 0) {
        Mask occupied = out.coarse_mask;
        for (std::size_t i = 0; i < occupied.size(); ++i) {
            if (out.gt_mask[i]) occupied.set(i, true);
        }
        const int max_axis = std::max(1, std::min({20, w / 4, h / 4}));
        const std::int64_t clear2 = static_cast<std::int64_t>(kBlobClearance) * kBlobClearance;
        for (int b = 0; b < spec.noise_blob_count; ++b) {
            const DistanceField clearance = distance_to(occupied);
            bool placed = false;
            for (int attempt = 0; attempt < kBlobAttempts && !placed; ++attempt) {
                const int ax = static_cast<int>(rng.uniform(1, max_axis));
                const int ay = static_cast<int>(rng.uniform(1, max_axis));
                const Point c{static_cast<int>(rng.uniform(ax, w - 1 - ax)), static_cast<int>(rng.uniform(ay, h - 1 - ay))};
                const auto px = blob_pixels(c, ax, ay);
                if (static_cast<std::int64_t>(px.size()) >= spec.noise_blob_max_area) continue;
                const bool clear = std::all_of(px.begin(), px.end(), [&](const Point& p) {
                    return out.coarse_mask.contains(p.x, p.y) && clearance.squared_at(p.x, p.y) > clear2;
                });
                if (!clear) continue;
                for (const Point& p : px) {
                    out.coarse_mask.set(p.x, p.y, true);
                    out.blob_mask.set(p.x, p.y, true);
                    occupied.set(p.x, p.y, true);
                }
                placed = true;
            }
            if (!placed) throw Error(ErrorKind::PhantomDoesNotFit, "noise blobs cannot fit on the canvas");
        }
    }
    return out;
}

std::string to_json(const PhantomSpec& spec) {
    nlohmann::ordered_json j;
    j["width"] = spec.width;
    j["height"] = spec.height;
    j["ribbon_count"] = spec.ribbon_count;
    j["ribbon_thickness"] = spec.ribbon_thickness;
    j["noise_blob_count"] = spec.noise_blob_count;
    j["noise_blob_max_area"] = spec.noise_blob_max_area;
    j["coarse_erosion"] = spec.coarse_erosion;
    j["rng_seed"] = spec.rng_seed;
    return j.dump(2) + "\n";
}

PhantomSpec phantom_spec_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        PhantomSpec spec;
        spec.width = j.value("width", spec.width);
        spec.height = j.value("height", spec.height);
        spec.ribbon_count = j.value("ribbon_count", spec.ribbon_count);
        spec.ribbon_thickness = j.value("ribbon_thickness", spec.ribbon_thickness);
        spec.noise_blob_count = j.value("noise_blob_count", spec.noise_blob_count);
        spec.noise_blob_max_area = j.value("noise_blob_max_area", spec.noise_blob_max_area);
        spec.coarse_erosion = j.value("coarse_erosion", spec.coarse_erosion);
        spec.rng_seed = j.value("rng_seed", spec.rng_seed);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("phantom spec: ") + e.what());
    }
}

}  // namespace maskprompt
