#include "tapemouse/segmentation.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tapemouse {

BinaryMask::BinaryMask(std::size_t width, std::size_t height, bool fill)
    : width_(width), height_(height), bits_(width * height, fill ? 1 : 0) {}

std::size_t BinaryMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::operator&(const BinaryMask& other) const {
    if (!same_shape(other)) {
        throw std::invalid_argument("mask dimensions differ");
    }
    BinaryMask out(width_, height_);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        out.bits_[i] = bits_[i] & other.bits_[i];
    }
    return out;
}

bool BinaryMask::is_subset_of(const BinaryMask& other) const {
    if (!same_shape(other)) {
        throw std::invalid_argument("mask dimensions differ");
    }
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] && !other.bits_[i]) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

BackgroundModel capture_background(std::span<const Frame> frames) {
    if (frames.empty()) {
        throw std::invalid_argument("background capture needs at least one frame");
    }
    const std::size_t w = frames.front().width();
    const std::size_t h = frames.front().height();
    std::vector<double> sum(w * h * 3, 0.0);
    for (const Frame& f : frames) {
        if (f.width() != w || f.height() != h) {
            throw std::invalid_argument("background frames have mismatched dimensions");
        }
        const auto px = f.data();
        for (std::size_t i = 0; i < px.size(); ++i) {
            sum[i] += px[i];
        }
    }
    BackgroundModel model{w, h, std::vector<float>(sum.size())};
    const double n = static_cast<double>(frames.size());
    for (std::size_t i = 0; i < sum.size(); ++i) {
        model.mean[i] = static_cast<float>(sum[i] / n);
    }
    return model;
}

ForegroundBounds foreground_bounds(const BackgroundModel& bg, double threshold) {
    ForegroundBounds b{bg.width, bg.height, {}, {}};
    b.lo.resize(bg.mean.size());
    b.span.resize(bg.mean.size());
    for (std::size_t i = 0; i < bg.mean.size(); ++i) {
        const double m = bg.mean[i];
        // lo: smallest v with !(m - v > t); hi: largest v with !(v - m > t).
        // v - m is exact in double, so the nudges settle on the exact edge.
        auto lo = static_cast<int>(std::ceil(m - threshold));
        while (m - (lo - 1) <= threshold) --lo;
        while (m - lo > threshold) ++lo;
        auto hi = static_cast<int>(std::floor(m + threshold));
        while ((hi + 1) - m <= threshold) ++hi;
        while (hi - m > threshold) --hi;
        lo = std::max(lo, 0);
        hi = std::min(hi, 255);
        if (hi < lo) {
            b.lo[i] = 256;
            b.span[i] = 0;
        } else {
            b.lo[i] = static_cast<std::uint16_t>(lo);
            b.span[i] = static_cast<std::uint16_t>(hi - lo);
        }
    }
    return b;
}

BinaryMask subtract_background(const Frame& frame, const ForegroundBounds& bounds) {
    if (frame.width() != bounds.width || frame.height() != bounds.height) {
        throw std::invalid_argument("frame and background model dimensions differ");
    }
    BinaryMask mask(frame.width(), frame.height());
    const std::uint8_t* px = frame.data().data();
    const std::uint16_t* lo = bounds.lo.data();
    const std::uint16_t* span = bounds.span.data();
    const std::size_t n = bounds.lo.size();
    std::vector<std::uint8_t> outside(n);
    for (std::size_t p = 0; p < n; ++p) {
        outside[p] = static_cast<std::uint16_t>(px[p] - lo[p]) > span[p];
    }
    auto bits = mask.bits();
    for (std::size_t i = 0, p = 0; i < bits.size(); ++i, p += 3) {
        bits[i] = outside[p] | outside[p + 1] | outside[p + 2];
    }
    return mask;
}

BinaryMask subtract_background(const Frame& frame, const BackgroundModel& bg, double threshold) {
    if (frame.width() != bg.width || frame.height() != bg.height) {
        throw std::invalid_argument("frame and background model dimensions differ");
    }
    return subtract_background(frame, foreground_bounds(bg, threshold));
}

// ---------------------------------------------------------------------------

SkinHistogram::SkinHistogram(int bins_per_channel) : bins_(bins_per_channel) {
    if (bins_per_channel < 1 || bins_per_channel > 256 ||
        !std::has_single_bit(static_cast<unsigned>(bins_per_channel))) {
        throw std::invalid_argument("bins per channel must divide 256, got " +
                                    std::to_string(bins_per_channel));
    }
    shift_ = 8 - std::countr_zero(static_cast<unsigned>(bins_per_channel));
    const std::size_t n = static_cast<std::size_t>(bins_) * bins_ * bins_;
    skin_.assign(n, 0);
    nonskin_.assign(n, 0);
}

std::size_t SkinHistogram::bin_index(Rgb8 c) const noexcept {
    const std::size_t r = c.r >> shift_;
    const std::size_t g = c.g >> shift_;
    const std::size_t b = c.b >> shift_;
    return (r * bins_ + g) * bins_ + b;
}

void SkinHistogram::add(Rgb8 c, bool is_skin, std::uint64_t n) {
    (is_skin ? skin_ : nonskin_)[bin_index(c)] += n;
}

bool SkinHistogram::has_counts() const noexcept {
    const auto positive = [](std::uint64_t v) { return v > 0; };
    return std::any_of(skin_.begin(), skin_.end(), positive) ||
           std::any_of(nonskin_.begin(), nonskin_.end(), positive);
}

SkinHistogram train_skin_histogram(std::span<const SkinSample> samples, int bins_per_channel) {
    SkinHistogram hist(bins_per_channel);
    for (const SkinSample& s : samples) {
        hist.add(s.color, s.is_skin);
    }
    return hist;
}

namespace {

void require_counts(const SkinHistogram& hist) {
    if (!hist.has_counts()) {
        throw std::logic_error("skin histogram has no training counts");
    }
}

double probability_unchecked(Rgb8 c, const SkinHistogram& hist) {
    const std::size_t bin = hist.bin_index(c);
    const double s = static_cast<double>(hist.skin_count(bin));
    const double n = static_cast<double>(hist.nonskin_count(bin));
    return s + n == 0.0 ? 0.0 : s / (s + n);
}

}  // namespace

double skin_probability(Rgb8 c, const SkinHistogram& hist) {
    require_counts(hist);
    return probability_unchecked(c, hist);
}

BinaryMask skin_mask(const Frame& frame, const SkinHistogram& hist, double theta) {
    return skin_mask(frame, hist, theta, BinaryMask(frame.width(), frame.height(), true));
}

BinaryMask skin_mask(const Frame& frame, const SkinHistogram& hist, double theta,
                     const BinaryMask& restrict_to) {
    if (!restrict_to.matches(frame)) {
        throw std::invalid_argument("restrict mask does not match frame dimensions");
    }
    require_counts(hist);
    BinaryMask mask(frame.width(), frame.height());
    for (std::size_t y = 0; y < frame.height(); ++y) {
        for (std::size_t x = 0; x < frame.width(); ++x) {
            if (restrict_to.at(x, y) && probability_unchecked(frame.at(x, y), hist) >= theta) {
                mask.set(x, y, true);
            }
        }
    }
    return mask;
}

SkinHistogram parse_skin_histogram(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string magic;
    int bins = 0;
    if (!(in >> magic >> bins) || magic != "SKINHIST") {
        throw std::runtime_error("skin histogram: expected 'SKINHIST <bins>' header");
    }
    SkinHistogram hist(bins);
    const std::size_t n = static_cast<std::size_t>(bins) * bins * bins;
    const int shift = 8 - std::countr_zero(static_cast<unsigned>(bins));
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = 0, ns = 0;
        if (!(in >> s >> ns)) {
            throw std::runtime_error("skin histogram: expected " + std::to_string(n) +
                                     " count lines, read " + std::to_string(i));
        }
        const std::size_t b = i % bins;
        const std::size_t g = (i / bins) % bins;
        const std::size_t r = i / (static_cast<std::size_t>(bins) * bins);
        const Rgb8 c{static_cast<std::uint8_t>(r << shift), static_cast<std::uint8_t>(g << shift),
                     static_cast<std::uint8_t>(b << shift)};
        hist.add(c, true, s);
        hist.add(c, false, ns);
    }
    std::string extra;
    if (in >> extra) {
        throw std::runtime_error("skin histogram: trailing data after counts");
    }
    return hist;
}

std::string render_skin_histogram(const SkinHistogram& hist) {
    std::string out = "SKINHIST " + std::to_string(hist.bins_per_channel()) + "\n";
    const auto skin = hist.skin_counts();
    const auto nonskin = hist.nonskin_counts();
    for (std::size_t i = 0; i < skin.size(); ++i) {
        out += std::to_string(skin[i]);
        out += ' ';
        out += std::to_string(nonskin[i]);
        out += '\n';
    }
    return out;
}

SkinHistogram load_skin_histogram(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open skin histogram " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_skin_histogram(text);
}

// ---------------------------------------------------------------------------

void ColorTarget::validate() const {
    if (!(hue_center >= 0.0 && hue_center < 360.0)) {
        throw std::invalid_argument("hue_center must be in [0, 360)");
    }
    if (!(hue_tol > 0.0 && hue_tol <= 180.0)) {
        throw std::invalid_argument("hue_tol must be in (0, 180]");
    }
    if (!(sat_min >= 0.0 && sat_min <= 1.0) || !(val_min >= 0.0 && val_min <= 1.0)) {
        throw std::invalid_argument("sat_min and val_min must be in [0, 1]");
    }
}

double hue_distance(double a, double b) noexcept {
    const double d = std::fabs(a - b);
    return std::min(d, 360.0 - d);
}

bool ColorTarget::contains(const HsvPixel& p) const noexcept {
    if (p.saturation <= 0.0) {
        return false;
    }
    return p.saturation >= sat_min && p.value >= val_min &&
           hue_distance(p.hue, hue_center) <= hue_tol;
}

BinaryMask color_mask(const Frame& frame, const ColorTarget& target) {
    BinaryMask mask(frame.width(), frame.height());
    const auto px = frame.data();
    auto bits = mask.bits();
    for (std::size_t i = 0, p = 0; i < bits.size(); ++i, p += 3) {
        bits[i] = target.contains(rgb_to_hsv(px[p], px[p + 1], px[p + 2])) ? 1 : 0;
    }
    return mask;
}

BinaryMask color_mask(const Frame& frame, const ColorTarget& target, const BinaryMask& restrict_to) {
    if (!restrict_to.matches(frame)) {
        throw std::invalid_argument("restrict mask does not match frame dimensions");
    }
    BinaryMask mask(frame.width(), frame.height());
    const auto px = frame.data();
    const auto allowed = restrict_to.bits();
    auto bits = mask.bits();
    for (std::size_t i = 0, p = 0; i < bits.size(); ++i, p += 3) {
        if (allowed[i]) {
            bits[i] = target.contains(rgb_to_hsv(px[p], px[p + 1], px[p + 2])) ? 1 : 0;
        }
    }
    return mask;
}

// ---------------------------------------------------------------------------

BinaryMask denoise(const BinaryMask& mask, int window, double majority) {
    if (window < 1 || window % 2 == 0) {
        throw std::invalid_argument("denoise window must be odd and >= 1, got " +
                                    std::to_string(window));
    }
    if (!(majority > 0.0 && majority <= 1.0)) {
        throw std::invalid_argument("denoise majority must be in (0, 1]");
    }
    const std::size_t w = mask.width();
    const std::size_t h = mask.height();
    const std::size_t half = static_cast<std::size_t>(window / 2);
    // count >= majority * window^2 for an integer count.
    const auto required = static_cast<std::uint32_t>(std::ceil(majority * window * window));

    // Separable box count: vertical window sums per column, maintained
    // incrementally down the rows, then a sliding horizontal window. Rows
    // without set bits change no column sums, and a window of such rows
    // leaves its output row zero.
    const auto in = mask.bits();
    std::vector<std::uint8_t> occupied(h);
    for (std::size_t y = 0; y < h; ++y) {
        const std::uint8_t* row = &in[y * w];
        occupied[y] = std::find(row, row + w, std::uint8_t{1}) != row + w;
    }

    std::vector<std::uint32_t> column(w, 0);
    std::size_t occupied_in_window = 0;
    for (std::size_t y = 0; y < std::min(half, h); ++y) {
        if (occupied[y]) {
            ++occupied_in_window;
            for (std::size_t x = 0; x < w; ++x) {
                column[x] += in[y * w + x];
            }
        }
    }

    BinaryMask out(w, h);
    auto bits = out.bits();
    for (std::size_t y = 0; y < h; ++y) {
        if (y + half < h && occupied[y + half]) {
            ++occupied_in_window;
            const std::uint8_t* add = &in[(y + half) * w];
            for (std::size_t x = 0; x < w; ++x) {
                column[x] += add[x];
            }
        }
        if (y > half && occupied[y - half - 1]) {
            --occupied_in_window;
            const std::uint8_t* drop = &in[(y - half - 1) * w];
            for (std::size_t x = 0; x < w; ++x) {
                column[x] -= drop[x];
            }
        }
        if (occupied_in_window == 0) {
            continue;
        }
        std::uint32_t count = 0;
        for (std::size_t x = 0; x < std::min(half, w); ++x) {
            count += column[x];
        }
        std::uint8_t* row = &bits[y * w];
        for (std::size_t x = 0; x < w; ++x) {
            if (x + half < w) {
                count += column[x + half];
            }
            if (x > half) {
                count -= column[x - half - 1];
            }
            row[x] = count >= required ? 1 : 0;
        }
    }
    return out;
}

}  // namespace tapemouse
