#include <gtest/gtest.h>

#include <random>

#include "maskprompt/error.hpp"
#include "maskprompt/raster.hpp"
#include "error_kind.hpp"
#include "oracles.hpp"

using namespace maskprompt;
using oracle::kind_of;

namespace {

std::vector<std::uint8_t> bytes_of(const Raster& r) { return {r.data().begin(), r.data().end()}; }

}  // namespace

TEST(RasterIo, LoadsTwoByTwoPgm) {
    oracle::TempDir dir("raster");
    const auto path = dir.path() / "a.pgm";
    oracle::write_bytes(path, std::string("P5\n# comment\n2 2\n255\n") + std::string("\x00\x80\xff\x07", 4));
    const Raster r = load_grayscale(path);
    EXPECT_EQ(r.width(), 2);
    EXPECT_EQ(r.height(), 2);
    EXPECT_EQ(bytes_of(r), (std::vector<std::uint8_t>{0, 128, 255, 7}));
}

TEST(RasterIo, ZeroSizedImageIsEmptyRaster) {
    oracle::TempDir dir("raster");
    const auto path = dir.path() / "empty.pgm";
    oracle::write_bytes(path, "P5\n0 0\n255\n");
    try {
        load_grayscale(path);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyRaster);
        EXPECT_NE(std::string(e.what()).find("empty raster"), std::string::npos);
    }
    EXPECT_EQ(kind_of([] { Raster(0, 0); }), ErrorKind::EmptyRaster);
}

TEST(RasterIo, MultiChannelPngKeepsFirstChannel) {
    oracle::TempDir dir("raster");
    const auto path = dir.path() / "rgb.png";
    RgbImage rgb{2, 2, {}};
    for (int i = 0; i < 4; ++i) rgb.data.insert(rgb.data.end(), {5, static_cast<std::uint8_t>(40 * i), 200});
    save_rgb(rgb, path);
    EXPECT_EQ(bytes_of(load_grayscale(path)), (std::vector<std::uint8_t>{5, 5, 5, 5}));
}

TEST(RasterIo, MissingAndUnsupportedFiles) {
    oracle::TempDir dir("raster");
    EXPECT_EQ(kind_of([&] { load_grayscale(dir.path() / "nope.png"); }), ErrorKind::FileNotFound);
    oracle::write_bytes(dir.path() / "x.bmp", "BM not an image");
    EXPECT_EQ(kind_of([&] { load_grayscale(dir.path() / "x.bmp"); }), ErrorKind::UnsupportedFormat);
}

TEST(Binarize, NonZeroBecomesOne) {
    EXPECT_EQ(binarize(Raster(4, 1, {0, 1, 128, 255})), Mask(4, 1, {0, 1, 1, 1}));
    EXPECT_EQ(binarize(Raster(3, 3, std::uint8_t{0})), Mask(3, 3, false));
    EXPECT_EQ(binarize(Raster(3, 3, std::uint8_t{255})), Mask(3, 3, true));
}

TEST(Mask, RejectsNonBinaryValues) {
    EXPECT_EQ(kind_of([] { Mask(2, 1, {0, 2}); }), ErrorKind::InvalidArgument);
}

TEST(RasterIo, SavedMaskScalesToFullRange) {
    oracle::TempDir dir("raster");
    for (const char* name : {"m.png", "m.pgm"}) {
        save_mask(Mask(2, 1, {0, 1}), dir.path() / name);
        EXPECT_EQ(bytes_of(load_grayscale(dir.path() / name)), (std::vector<std::uint8_t>{0, 255})) << name;
    }
}

TEST(RasterIo, RandomMaskRoundTrip) {
    oracle::TempDir dir("raster");
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const Mask m = oracle::random_mask(rng, oracle::uniform(rng, 1, 40), oracle::uniform(rng, 1, 40), 0.4);
        const auto path = dir.path() / (trial % 2 == 0 ? "r.png" : "r.pgm");
        save_mask(m, path);
        ASSERT_EQ(binarize(load_grayscale(path)), m) << "trial " << trial;
    }
}

TEST(RasterIo, OneByOneMask) {
    oracle::TempDir dir("raster");
    save_mask(Mask(1, 1, {1}), dir.path() / "one.png");
    const Raster r = load_grayscale(dir.path() / "one.png");
    EXPECT_EQ(r.width(), 1);
    EXPECT_EQ(r.height(), 1);
    EXPECT_EQ(r.at(0, 0), 255);
}

TEST(RasterIo, GrayscaleRoundTripKeepsValues) {
    oracle::TempDir dir("raster");
    Raster r(3, 2, {0, 17, 99, 128, 200, 255});
    save_grayscale(r, dir.path() / "g.png");
    EXPECT_EQ(load_grayscale(dir.path() / "g.png"), r);
}
