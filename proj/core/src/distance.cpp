#include "maskprompt/distance.hpp"

#include <algorithm>
#include <limits>

namespace maskprompt {
namespace {

template <typename T>
T floor_div(T a, T b) {
    T q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Lower envelope of parabolas for columns [lo, hi] of one row, written to
// the non-feature pixels of that window. `gr` holds squared vertical
// distances indexed by padded column.
template <typename T>
void envelope_window(const T* gr, int lo, int hi, int pad, int w, int* sv, int* tv, std::int64_t* out) {
    auto f = [&](int x, int i) {
        const T d = static_cast<T>(x - i);
        return d * d + gr[i];
    };
    auto sep = [&](int i, int u) {
        return floor_div<T>(static_cast<T>(u) * u - static_cast<T>(i) * i + gr[u] - gr[i],
                            static_cast<T>(2 * (u - i)));
    };
    int q = 0;
    sv[0] = lo;
    tv[0] = lo;
    for (int u = lo + 1; u <= hi; ++u) {
        while (q >= 0 && f(tv[q], sv[q]) > f(tv[q], u)) --q;
        if (q < 0) {
            q = 0;
            sv[0] = u;
            tv[0] = lo;
        } else {
            const T next = 1 + sep(sv[q], u);
            if (next <= hi) {
                ++q;
                sv[q] = u;
                tv[q] = static_cast<int>(next);
            }
        }
    }
    for (int u = hi; u >= lo; --u) {
        const int x = u - pad;
        if (x >= 0 && x < w && gr[u] != 0) out[x] = static_cast<std::int64_t>(f(u, sv[q]));
        if (u == tv[q]) --q;
    }
}

// Phase 2 per row. A non-feature pixel's nearest feature is no farther than
// the features bounding its run in the same row, so each maximal run of
// non-feature columns only needs the window from one bounding feature to
// the other. With a border the row is extended by one feature column on
// each side.
template <typename T>
void envelope_rows(const std::vector<std::int32_t>& g, int w, int h, bool border, std::vector<std::int64_t>& out) {
    const int pad = border ? 1 : 0;
    const int m = w + 2 * pad;
    std::vector<T> row(static_cast<std::size_t>(m));
    std::vector<int> s(static_cast<std::size_t>(m));
    std::vector<int> t(static_cast<std::size_t>(m));
    T* gr = row.data();
    for (int y = 0; y < h; ++y) {
        const std::size_t base = static_cast<std::size_t>(y) * static_cast<std::size_t>(w);
        if (border) {
            gr[0] = 0;
            gr[m - 1] = 0;
        }
        for (int x = 0; x < w; ++x) {
            const T v = static_cast<T>(g[base + static_cast<std::size_t>(x)]);
            gr[x + pad] = v * v;
        }
        std::int64_t* dst = out.data() + base;
        int u = 0;
        while (u < m) {
            if (gr[u] == 0) {
                ++u;
                continue;
            }
            int end = u;
            while (end + 1 < m && gr[end + 1] != 0) ++end;
            envelope_window<T>(gr, std::max(0, u - 1), std::min(m - 1, end + 1), pad, w, s.data(), t.data(), dst);
            u = end + 1;
        }
    }
}

// Meijster, Roerdink & Hesselink linear-time exact EDT in integer arithmetic.
// `is_feature(i)` selects the zero set; `border` adds a feature ring just
// outside the image.
template <typename IsFeature>
DistanceField squared_edt(int w, int h, IsFeature is_feature, bool border) {
    DistanceField out;
    out.width = w;
    out.height = h;
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    out.squared.assign(n, 0);

    // Vertical distances never exceed w + h + 2, which fits comfortably in
    // 32 bits for any raster that fits in memory.
    const std::int32_t inf = w + h + 2;
    std::vector<std::int32_t> g(n);
    bool any_feature = border;

    // Phase 1: vertical distances, swept row by row in both directions.
    const std::size_t uw = static_cast<std::size_t>(w);
    const std::int32_t edge = border ? 1 : inf;
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * uw;
        for (std::size_t x = 0; x < uw; ++x) {
            const std::size_t i = row + x;
            if (is_feature(i)) {
                g[i] = 0;
                any_feature = true;
            } else {
                g[i] = y == 0 ? edge : std::min(inf, g[i - uw] + 1);
            }
        }
    }
    for (int y = h - 1; y >= 0; --y) {
        const std::size_t row = static_cast<std::size_t>(y) * uw;
        for (std::size_t x = 0; x < uw; ++x) {
            const std::size_t i = row + x;
            const std::int32_t below = y == h - 1 ? edge : std::min(inf, g[i + uw] + 1);
            g[i] = std::min(g[i], below);
        }
    }
    if (!any_feature) {
        std::fill(out.squared.begin(), out.squared.end(), DistanceField::kUnreachable);
        return out;
    }

    // Phase 2. 32-bit arithmetic is exact whenever the largest separator
    // numerator fits, and integer division dominates the cost.
    const std::int64_t span = static_cast<std::int64_t>(w) + 2 + inf;
    if (2 * span * span < std::numeric_limits<std::int32_t>::max()) {
        envelope_rows<std::int32_t>(g, w, h, border, out.squared);
    } else {
        envelope_rows<std::int64_t>(g, w, h, border, out.squared);
    }
    return out;
}

}  // namespace

DistanceField distance_transform(const Mask& mask) {
    return squared_edt(mask.width(), mask.height(), [&](std::size_t i) { return !mask[i]; }, true);
}

DistanceField distance_to(const Mask& features) {
    return squared_edt(features.width(), features.height(), [&](std::size_t i) { return features[i]; }, false);
}

}  // namespace maskprompt
