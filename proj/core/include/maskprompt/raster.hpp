#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace maskprompt {

/// Pixel coordinate. x is the column, y the row; origin is top-left.
struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// 8-bit grayscale image, row-major.
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, std::uint8_t fill = 0);
    Raster(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
    void set(int x, int y, std::uint8_t v) { data_[index(x, y)] = v; }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::span<std::uint8_t> data() noexcept { return data_; }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Binary raster; every element is 0 (background) or 1 (foreground).
class Mask {
public:
    Mask() = default;
    Mask(int width, int height, bool fill = false);
    /// Throws InvalidArgument if any element is not 0 or 1.
    Mask(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    bool at(int x, int y) const { return data_[index(x, y)] != 0; }
    void set(int x, int y, bool v) { data_[index(x, y)] = v ? 1 : 0; }
    bool operator[](std::size_t i) const { return data_[i] != 0; }
    void set(std::size_t i, bool v) { data_[i] = v ? 1 : 0; }

    std::span<const std::uint8_t> data() const noexcept { return data_; }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }
    Point point(std::size_t i) const noexcept {
        return {static_cast<int>(i % static_cast<std::size_t>(width_)),
                static_cast<int>(i / static_cast<std::size_t>(width_))};
    }

    std::size_t count() const noexcept;
    bool any() const noexcept { return count() != 0; }
    bool same_shape(const Mask& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Interleaved 8-bit RGB image, used for overlays.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 bytes per pixel
};

// Loads a PNG or binary PGM (P5). Multi-channel input keeps channel 0.
// Errors: FileNotFound, UnsupportedFormat, EmptyRaster, Io.
Raster load_grayscale(const std::filesystem::path& path);

Mask binarize(const Raster& raster);

/// Mask as a 0/255 raster.
Raster to_raster(const Mask& mask);

// Writes an 8-bit single-channel PNG (foreground 255). A `.pgm` extension
// selects binary PGM instead.
void save_mask(const Mask& mask, const std::filesystem::path& path);
void save_grayscale(const Raster& raster, const std::filesystem::path& path);
void save_rgb(const RgbImage& image, const std::filesystem::path& path);

}  // namespace maskprompt
