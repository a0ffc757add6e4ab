#include "maskprompt/raster.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "maskprompt/error.hpp"

namespace maskprompt {
namespace fs = std::filesystem;

namespace {

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw Error(ErrorKind::EmptyRaster, "empty raster");
    }
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool is_png(const std::vector<std::uint8_t>& bytes) {
    static constexpr std::array<std::uint8_t, 8> kSig{0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    return bytes.size() >= kSig.size() && std::equal(kSig.begin(), kSig.end(), bytes.begin());
}

bool is_pgm(const std::vector<std::uint8_t>& bytes) {
    return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5';
}

// Netpbm header token reader: skips whitespace and '#' comments.
class PgmHeader {
public:
    explicit PgmHeader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes), pos_(2) {}

    long next_int(const fs::path& path) {
        skip_space();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw Error(ErrorKind::UnsupportedFormat, "malformed PGM header in " + path.string());
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > (1L << 30)) {
                throw Error(ErrorKind::UnsupportedFormat, "PGM dimension overflow in " + path.string());
            }
            ++pos_;
        }
        return v;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t data_offset() const { return pos_ + 1; }

private:
    void skip_space() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_;
};

Raster decode_pgm(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
    PgmHeader header(bytes);
    const long width = header.next_int(path);
    const long height = header.next_int(path);
    const long maxval = header.next_int(path);
    check_dims(static_cast<int>(width), static_cast<int>(height));
    if (maxval <= 0 || maxval > 255) {
        throw Error(ErrorKind::UnsupportedFormat, "only 8-bit PGM is supported: " + path.string());
    }
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t offset = header.data_offset();
    if (bytes.size() < offset + n) {
        throw Error(ErrorKind::Io, "truncated PGM raster in " + path.string());
    }
    std::vector<std::uint8_t> data(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(offset + n));
    return Raster(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

Raster decode_png(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw Error(ErrorKind::Io, "cannot decode PNG " + path.string() + ": " + image.message);
    }
    if (image.width == 0 || image.height == 0) {
        png_image_free(&image);
        throw Error(ErrorKind::EmptyRaster, "empty raster");
    }
    // Keep alpha in the requested layout so libpng never composites.
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGBA : PNG_FORMAT_GA;
    const std::size_t channels = color ? 4 : 2;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw Error(ErrorKind::Io, "cannot decode PNG " + path.string() + ": " + message);
    }
    const int width = static_cast<int>(image.width);
    const int height = static_cast<int>(image.height);
    std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = buffer[i * channels];
    return Raster(width, height, std::move(data));
}

bool wants_pgm(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".pgm";
}

void write_pgm(const Raster& raster, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << "P5\n" << raster.width() << ' ' << raster.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(raster.data().data()),
              static_cast<std::streamsize>(raster.size()));
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

void write_png(const fs::path& path, int width, int height, png_uint_32 format, const std::uint8_t* pixels) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels, 0, nullptr)) {
        throw Error(ErrorKind::Io, "cannot write PNG " + path.string() + ": " + image.message);
    }
}

}  // namespace

Raster::Raster(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Raster::Raster(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw Error(ErrorKind::InvalidArgument, "raster data length does not match width*height");
    }
}

Mask::Mask(int width, int height, bool fill) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0);
}

Mask::Mask(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw Error(ErrorKind::InvalidArgument, "mask data length does not match width*height");
    }
    if (std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v > 1; })) {
        throw Error(ErrorKind::InvalidArgument, "mask values must be 0 or 1");
    }
}

std::size_t Mask::count() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

Raster load_grayscale(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw Error(ErrorKind::FileNotFound, "no such file: " + path.string());
    }
    const auto bytes = read_file(path);
    if (is_png(bytes)) return decode_png(bytes, path);
    if (is_pgm(bytes)) return decode_pgm(bytes, path);
    throw Error(ErrorKind::UnsupportedFormat, "not a PNG or binary PGM: " + path.string());
}

Mask binarize(const Raster& raster) {
    std::vector<std::uint8_t> out(raster.size());
    std::transform(raster.data().begin(), raster.data().end(), out.begin(),
                   [](std::uint8_t v) -> std::uint8_t { return v != 0 ? 1 : 0; });
    return Mask(raster.width(), raster.height(), std::move(out));
}

Raster to_raster(const Mask& mask) {
    std::vector<std::uint8_t> out(mask.size());
    std::transform(mask.data().begin(), mask.data().end(), out.begin(),
                   [](std::uint8_t v) -> std::uint8_t { return v != 0 ? 255 : 0; });
    return Raster(mask.width(), mask.height(), std::move(out));
}

void save_grayscale(const Raster& raster, const fs::path& path) {
    if (wants_pgm(path)) {
        write_pgm(raster, path);
        return;
    }
    write_png(path, raster.width(), raster.height(), PNG_FORMAT_GRAY, raster.data().data());
}

void save_mask(const Mask& mask, const fs::path& path) {
    save_grayscale(to_raster(mask), path);
}

void save_rgb(const RgbImage& image, const fs::path& path) {
    check_dims(image.width, image.height);
    if (image.data.size() != static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height) * 3) {
        throw Error(ErrorKind::InvalidArgument, "rgb data length does not match width*height*3");
    }
    write_png(path, image.width, image.height, PNG_FORMAT_RGB, image.data.data());
}

}  // namespace maskprompt
