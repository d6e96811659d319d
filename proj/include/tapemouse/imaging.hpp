#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tapemouse {

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

struct Point2d {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2d&, const Point2d&) = default;
};

/// An RGB8 raster, row-major with a top-left origin, stamped with the
/// stream time it was captured at.
class Frame {
public:
    /// Black frame of the given size. Throws std::invalid_argument when a
    /// dimension is zero.
    Frame(std::size_t width, std::size_t height, std::int64_t timestamp_ms = 0);

    /// Adopts a pixel buffer; its length must be width * height * 3.
    Frame(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels,
          std::int64_t timestamp_ms = 0);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return width_ * height_; }
    std::int64_t timestamp_ms() const noexcept { return timestamp_ms_; }
    void set_timestamp_ms(std::int64_t t) noexcept { timestamp_ms_ = t; }

    Rgb8 at(std::size_t x, std::size_t y) const noexcept {
        const std::uint8_t* p = &pixels_[(y * width_ + x) * 3];
        return {p[0], p[1], p[2]};
    }
    void set(std::size_t x, std::size_t y, Rgb8 c) noexcept {
        std::uint8_t* p = &pixels_[(y * width_ + x) * 3];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }

    std::span<const std::uint8_t> data() const noexcept { return pixels_; }

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> pixels_;
    std::int64_t timestamp_ms_;
};

// Hue in degrees [0, 360), saturation and value in [0, 1]. Achromatic
// pixels (saturation 0) carry hue 0; consumers must check saturation first.
struct HsvPixel {
    double hue = 0.0;
    double saturation = 0.0;
    double value = 0.0;
};

HsvPixel rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;
inline HsvPixel rgb_to_hsv(Rgb8 c) noexcept { return rgb_to_hsv(c.r, c.g, c.b); }

// ---------------------------------------------------------------------------
// Binary P6 portable pixmap I/O
// ---------------------------------------------------------------------------

enum class PpmErrorKind {
    MalformedHeader,
    BadDimensions,
    UnsupportedMaxval,
    TruncatedPayload,
};

class PpmError : public std::runtime_error {
public:
    PpmError(PpmErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    PpmErrorKind kind() const noexcept { return kind_; }

private:
    PpmErrorKind kind_;
};

/// Parses a binary P6 image with maxval 255. Header tokens may be separated
/// by any whitespace and '#' comments. The returned frame has timestamp 0.
Frame load_ppm(std::string_view bytes);

/// Canonical encoding: "P6\n<w> <h>\n255\n" followed by the raw pixels.
std::string save_ppm(const Frame& frame);

Frame read_ppm_file(const std::filesystem::path& path);
void write_ppm_file(const std::filesystem::path& path, const Frame& frame);

/// Files named frame_*.ppm in `dir`, sorted lexicographically.
std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir);

/// Zero-padded name used for frame sequences: frame_000001.ppm for index 1.
std::string frame_file_name(std::size_t index);

/// Stream timestamp of the frame at `index` for a sequence recorded at `fps`:
/// floor(index * 1000 / fps).
std::int64_t frame_timestamp_ms(std::size_t index, int fps);

// ---------------------------------------------------------------------------
// Synthetic scenes
// ---------------------------------------------------------------------------

struct DiskSpec {
    Point2d center;
    double radius = 1.0;
    Rgb8 color;
};

/// Pixel (px, py) belongs to the disk iff its center (px+0.5, py+0.5) lies
/// within `radius` of `center`.
bool disk_covers(const DiskSpec& disk, std::size_t px, std::size_t py) noexcept;

/// Paints `disks` in order over a uniform background.
Frame synth_frame(std::size_t width, std::size_t height, Rgb8 background,
                  std::span<const DiskSpec> disks, std::int64_t timestamp_ms = 0);

}  // namespace tapemouse
