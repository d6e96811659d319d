#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tapemouse/imaging.hpp"

namespace tapemouse {

/// One boolean per pixel, row-major; same dimensions as its source frame.
class BinaryMask {
public:
    BinaryMask(std::size_t width, std::size_t height, bool fill = false);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }

    bool at(std::size_t x, std::size_t y) const noexcept { return bits_[y * width_ + x] != 0; }
    void set(std::size_t x, std::size_t y, bool on) noexcept { bits_[y * width_ + x] = on ? 1 : 0; }

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::span<std::uint8_t> bits() noexcept { return bits_; }

    std::size_t count() const noexcept;
    bool same_shape(const BinaryMask& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }
    bool matches(const Frame& frame) const noexcept {
        return width_ == frame.width() && height_ == frame.height();
    }

    /// Bitwise AND; shapes must match.
    BinaryMask operator&(const BinaryMask& other) const;
    /// True when every set bit of *this is also set in `other`.
    bool is_subset_of(const BinaryMask& other) const;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> bits_;
};

// ---------------------------------------------------------------------------
// Background subtraction
// ---------------------------------------------------------------------------

struct BackgroundModel {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<float> mean;  // width * height * 3, RGB interleaved
};

/// Per-pixel, per-channel mean of one or more frames of identical size.
BackgroundModel capture_background(std::span<const Frame> frames);

/// Foreground iff max over channels of |pixel - mean| > threshold.
BinaryMask subtract_background(const Frame& frame, const BackgroundModel& bg, double threshold);

/// The same test as integer per-channel ranges: a channel value v is
/// background iff lo <= v <= lo + span, i.e. iff the unsigned 16-bit
/// difference v - lo is at most span. An empty range has lo = 256.
/// Computed once per model and threshold.
struct ForegroundBounds {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint16_t> lo;  // width * height * 3
    std::vector<std::uint16_t> span;
};

ForegroundBounds foreground_bounds(const BackgroundModel& bg, double threshold);
BinaryMask subtract_background(const Frame& frame, const ForegroundBounds& bounds);

// ---------------------------------------------------------------------------
// Histogram skin classifier
// ---------------------------------------------------------------------------

struct SkinSample {
    Rgb8 color;
    bool is_skin = false;
};

class SkinHistogram {
public:
    /// Empty histogram. `bins_per_channel` must be a power of two in [1, 256].
    explicit SkinHistogram(int bins_per_channel = 32);

    int bins_per_channel() const noexcept { return bins_; }
    std::size_t bin_index(Rgb8 c) const noexcept;

    std::uint64_t skin_count(std::size_t bin) const { return skin_.at(bin); }
    std::uint64_t nonskin_count(std::size_t bin) const { return nonskin_.at(bin); }
    void add(Rgb8 c, bool is_skin, std::uint64_t n = 1);

    /// At least one bin across both classes is positive.
    bool has_counts() const noexcept;

    std::span<const std::uint64_t> skin_counts() const noexcept { return skin_; }
    std::span<const std::uint64_t> nonskin_counts() const noexcept { return nonskin_; }

    friend bool operator==(const SkinHistogram&, const SkinHistogram&) = default;

private:
    int bins_;
    int shift_;
    std::vector<std::uint64_t> skin_;
    std::vector<std::uint64_t> nonskin_;
};

SkinHistogram train_skin_histogram(std::span<const SkinSample> samples, int bins_per_channel = 32);

/// s / (s + n) for the pixel's bin; 0 for a bin never seen in training.
/// Throws std::logic_error when the histogram holds no counts at all.
double skin_probability(Rgb8 c, const SkinHistogram& hist);

BinaryMask skin_mask(const Frame& frame, const SkinHistogram& hist, double theta);
BinaryMask skin_mask(const Frame& frame, const SkinHistogram& hist, double theta,
                     const BinaryMask& restrict_to);

// "SKINHIST <bins>" then bins^3 lines of "skin nonskin", r-major, b-minor.
SkinHistogram parse_skin_histogram(std::string_view text);
std::string render_skin_histogram(const SkinHistogram& hist);
SkinHistogram load_skin_histogram(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// HSV tolerance mask
// ---------------------------------------------------------------------------

struct ColorTarget {
    double hue_center = 0.0;  // degrees [0, 360)
    double hue_tol = 15.0;    // degrees (0, 180]
    double sat_min = 0.4;
    double val_min = 0.3;

    void validate() const;

    /// Circular hue distance within tolerance and saturation/value floors met.
    /// Achromatic pixels (saturation 0) never match: their stored hue is a
    /// sentinel, not a colour.
    bool contains(const HsvPixel& p) const noexcept;

    friend bool operator==(const ColorTarget&, const ColorTarget&) = default;
};

double hue_distance(double a, double b) noexcept;

BinaryMask color_mask(const Frame& frame, const ColorTarget& target);
BinaryMask color_mask(const Frame& frame, const ColorTarget& target, const BinaryMask& restrict_to);

// ---------------------------------------------------------------------------
// Convolution denoise
// ---------------------------------------------------------------------------

/// Box-majority filter: an output bit is set iff the set-bit count in its
/// window x window neighbourhood (zero padded) is >= majority * window^2.
BinaryMask denoise(const BinaryMask& mask, int window, double majority);

}  // namespace tapemouse
