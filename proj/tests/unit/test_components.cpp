#include <gtest/gtest.h>

#include <random>

#include "maskprompt/components.hpp"
#include "oracles.hpp"

using namespace maskprompt;

namespace {

Mask diagonal_pair() {
    Mask m(3, 3);
    m.set(0, 0, true);
    m.set(1, 1, true);
    return m;
}

}  // namespace

TEST(Components, DiagonalPairIsOneComponentUnderEight) {
    const Labeling l = label_components(diagonal_pair(), Connectivity::Eight);
    ASSERT_EQ(l.stats.size(), 1u);
    EXPECT_EQ(l.stats[0], (ComponentStats{1, 2, 0, 0, 2, 2}));
}

TEST(Components, DiagonalPairIsTwoComponentsUnderFour) {
    const Labeling l = label_components(diagonal_pair(), Connectivity::Four);
    ASSERT_EQ(l.stats.size(), 2u);
    EXPECT_EQ(l.stats[0].area, 1);
    EXPECT_EQ(l.stats[1].area, 1);
    EXPECT_EQ(l.labels.at(0, 0), 1);
    EXPECT_EQ(l.labels.at(1, 1), 2);
}

TEST(Components, EmptyMaskHasNoComponents) {
    const Labeling l = label_components(Mask(5, 4));
    EXPECT_TRUE(l.stats.empty());
    for (auto v : l.labels.labels) EXPECT_EQ(v, 0);
}

TEST(Components, MatchesFloodFillOnRandomMasks) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const Mask m = oracle::random_mask(rng, oracle::uniform(rng, 1, 48), oracle::uniform(rng, 1, 48),
                                           0.2 + 0.05 * (trial % 12));
        for (Connectivity c : {Connectivity::Four, Connectivity::Eight}) {
            const Labeling l = label_components(m, c);
            const auto expected = oracle::flood_fill_labels(m, c);
            // Both number components in raster order, so ids agree exactly.
            ASSERT_EQ(l.labels.labels, expected) << "trial " << trial;
        }
    }
}

TEST(Components, StatsAreTightAndDense) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const Mask m = oracle::random_blobs(rng, 50, 40, 6, 12);
        const Labeling l = label_components(m);
        for (std::size_t k = 0; k < l.stats.size(); ++k) {
            const ComponentStats& s = l.stats[k];
            ASSERT_EQ(s.id, static_cast<std::int32_t>(k + 1));
            std::int64_t area = 0;
            int x0 = 50, y0 = 40, x1 = -1, y1 = -1;
            for (int y = 0; y < 40; ++y) {
                for (int x = 0; x < 50; ++x) {
                    if (l.labels.at(x, y) != s.id) continue;
                    ++area;
                    x0 = std::min(x0, x);
                    y0 = std::min(y0, y);
                    x1 = std::max(x1, x);
                    y1 = std::max(y1, y);
                }
            }
            EXPECT_EQ(s, (ComponentStats{s.id, area, x0, y0, x1 - x0 + 1, y1 - y0 + 1}));
        }
    }
}

TEST(Components, ComponentMaskSelectsOneId) {
    Mask m(5, 1, {1, 0, 1, 1, 0});
    const Labeling l = label_components(m);
    EXPECT_EQ(component_mask(l.labels, 2), Mask(5, 1, {0, 0, 1, 1, 0}));
}
