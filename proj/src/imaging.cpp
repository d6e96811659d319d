#include "tapemouse/imaging.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>

namespace tapemouse {

Frame::Frame(std::size_t width, std::size_t height, std::int64_t timestamp_ms)
    : Frame(width, height, std::vector<std::uint8_t>(width * height * 3, 0), timestamp_ms) {}

Frame::Frame(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels,
             std::int64_t timestamp_ms)
    : width_(width), height_(height), pixels_(std::move(pixels)), timestamp_ms_(timestamp_ms) {
    if (width_ == 0 || height_ == 0) {
        throw std::invalid_argument("frame dimensions must be at least 1x1");
    }
    if (pixels_.size() != width_ * height_ * 3) {
        throw std::invalid_argument("pixel buffer length does not match frame dimensions");
    }
    if (timestamp_ms_ < 0) {
        throw std::invalid_argument("frame timestamp must be non-negative");
    }
}

HsvPixel rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    const int hi = std::max({r, g, b});
    const int lo = std::min({r, g, b});
    const int delta = hi - lo;

    HsvPixel out;
    out.value = hi / 255.0;
    out.saturation = hi == 0 ? 0.0 : static_cast<double>(delta) / hi;
    if (delta == 0) {
        return out;
    }

    double h;
    if (hi == r) {
        h = 60.0 * static_cast<double>(g - b) / delta;
    } else if (hi == g) {
        h = 60.0 * (static_cast<double>(b - r) / delta + 2.0);
    } else {
        h = 60.0 * (static_cast<double>(r - g) / delta + 4.0);
    }
    if (h < 0.0) {
        h += 360.0;
    }
    if (h >= 360.0) {
        h -= 360.0;
    }
    out.hue = h;
    return out;
}

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderReader {
public:
    explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    std::optional<std::uint64_t> number() {
        skip_separators();
        std::uint64_t value = 0;
        const char* first = bytes_.data() + pos_;
        const char* last = bytes_.data() + bytes_.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr == first) {
            return std::nullopt;
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        // A token must end at whitespace or a comment.
        if (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') {
            return std::nullopt;
        }
        return value;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

Frame load_ppm(std::string_view bytes) {
    if (bytes.size() < 3 || bytes[0] != 'P' || bytes[1] != '6' || !is_space(bytes[2])) {
        throw PpmError(PpmErrorKind::MalformedHeader, "ppm: missing P6 magic");
    }
    HeaderReader reader(bytes);
    reader.advance(2);

    const auto width = reader.number();
    const auto height = reader.number();
    if (!width || !height) {
        throw PpmError(PpmErrorKind::MalformedHeader, "ppm: unreadable dimensions");
    }
    constexpr std::uint64_t kMaxSide = 1u << 16;
    if (*width == 0 || *height == 0 || *width > kMaxSide || *height > kMaxSide) {
        throw PpmError(PpmErrorKind::BadDimensions,
                       "ppm: dimensions " + std::to_string(*width) + "x" +
                           std::to_string(*height) + " out of range");
    }
    const auto maxval = reader.number();
    if (!maxval) {
        throw PpmError(PpmErrorKind::MalformedHeader, "ppm: unreadable maxval");
    }
    if (*maxval != 255) {
        throw PpmError(PpmErrorKind::UnsupportedMaxval,
                       "ppm: maxval " + std::to_string(*maxval) + " is not 255");
    }

    const std::size_t payload = static_cast<std::size_t>(*width * *height * 3);
    // Exactly one whitespace byte separates maxval from the raster.
    if (reader.pos() < bytes.size() && !is_space(bytes[reader.pos()])) {
        throw PpmError(PpmErrorKind::MalformedHeader, "ppm: no separator after maxval");
    }
    const std::size_t start = reader.pos() + 1;
    if (reader.pos() >= bytes.size() || bytes.size() - start < payload) {
        throw PpmError(PpmErrorKind::TruncatedPayload,
                       "ppm: expected " + std::to_string(payload) + " payload bytes");
    }
    const auto* first = reinterpret_cast<const std::uint8_t*>(bytes.data() + start);
    std::vector<std::uint8_t> pixels(first, first + payload);
    return Frame(static_cast<std::size_t>(*width), static_cast<std::size_t>(*height),
                 std::move(pixels));
}

std::string save_ppm(const Frame& frame) {
    std::string out = "P6\n" + std::to_string(frame.width()) + " " +
                      std::to_string(frame.height()) + "\n255\n";
    const auto data = frame.data();
    out.append(reinterpret_cast<const char*>(data.data()), data.size());
    return out;
}

Frame read_ppm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_ppm(bytes);
}

void write_ppm_file(const std::filesystem::path& path, const Frame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    const std::string bytes = save_ppm(frame);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw std::runtime_error("not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const std::string name = entry.path().filename().string();
        if (name.starts_with("frame_") && name.ends_with(".ppm")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });
    return files;
}

std::string frame_file_name(std::size_t index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 6) {
        digits.insert(0, 6 - digits.size(), '0');
    }
    return "frame_" + digits + ".ppm";
}

std::int64_t frame_timestamp_ms(std::size_t index, int fps) {
    if (fps <= 0) {
        throw std::invalid_argument("fps must be positive");
    }
    return static_cast<std::int64_t>(index) * 1000 / fps;
}

bool disk_covers(const DiskSpec& disk, std::size_t px, std::size_t py) noexcept {
    const double dx = static_cast<double>(px) + 0.5 - disk.center.x;
    const double dy = static_cast<double>(py) + 0.5 - disk.center.y;
    return dx * dx + dy * dy <= disk.radius * disk.radius;
}

Frame synth_frame(std::size_t width, std::size_t height, Rgb8 background,
                  std::span<const DiskSpec> disks, std::int64_t timestamp_ms) {
    Frame frame(width, height, timestamp_ms);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            frame.set(x, y, background);
        }
    }
    for (const DiskSpec& disk : disks) {
        // Only visit the disk's bounding box; disk_covers decides membership.
        const double x0 = std::floor(disk.center.x - disk.radius - 1.0);
        const double x1 = std::ceil(disk.center.x + disk.radius + 1.0);
        const double y0 = std::floor(disk.center.y - disk.radius - 1.0);
        const double y1 = std::ceil(disk.center.y + disk.radius + 1.0);
        const auto clamp_to = [](double v, std::size_t limit) {
            return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(limit)));
        };
        const std::size_t xs = clamp_to(x0, width), xe = clamp_to(x1, width);
        const std::size_t ys = clamp_to(y0, height), ye = clamp_to(y1, height);
        for (std::size_t y = ys; y < ye; ++y) {
            for (std::size_t x = xs; x < xe; ++x) {
                if (disk_covers(disk, x, y)) {
                    frame.set(x, y, disk.color);
                }
            }
        }
    }
    return frame;
}

}  // namespace tapemouse
