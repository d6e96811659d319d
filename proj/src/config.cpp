#include "tapemouse/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iterator>
#include <stdexcept>
#include <system_error>
#include <type_traits>
#include <vector>

namespace tapemouse {

void PipelineConfig::validate() const {
    camera.validate();
    screen.validate();
    if (fps <= 0) {
        throw std::invalid_argument("fps must be positive");
    }
    yellow.validate();
    red.validate();
    if (!(bg_threshold >= 0.0 && bg_threshold <= 255.0)) {
        throw std::invalid_argument("background.threshold must be in [0, 255]");
    }
    if (skin_enabled && skin_histogram_path.empty()) {
        throw std::invalid_argument("skin.enabled requires skin.histogram_path");
    }
    if (!(theta >= 0.0)) {
        throw std::invalid_argument("skin.theta must be non-negative");
    }
    if (denoise_window < 1 || denoise_window % 2 == 0) {
        throw std::invalid_argument("denoise.window must be odd and >= 1");
    }
    if (!(denoise_majority > 0.0 && denoise_majority <= 1.0)) {
        throw std::invalid_argument("denoise.majority must be in (0, 1]");
    }
    gesture.validate();
    if (!(gain > 0.0) || !(exponent > 0.0)) {
        throw std::invalid_argument("speed.gain and speed.exponent must be positive");
    }
}

PointerSettings PipelineConfig::pointer_settings() const {
    return {mode, camera, screen, gain, exponent};
}

std::size_t PipelineConfig::effective_min_blob_area() const {
    return scaled_min_blob_area(min_blob_area, static_cast<std::size_t>(camera.width),
                                static_cast<std::size_t>(camera.height));
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace {

template <typename T>
T parse_value(std::string_view text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw std::invalid_argument("bad number '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view text) {
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    throw std::invalid_argument("bad boolean '" + std::string(text) + "'");
}

struct Field {
    std::string key;
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, std::string_view)> set;
};

template <typename T>
Field number_field(std::string key, T PipelineConfig::*member) {
    return {std::move(key),
            [member](const PipelineConfig& c) {
                if constexpr (std::is_floating_point_v<T>) {
                    return format_number(c.*member);
                } else {
                    return std::to_string(c.*member);
                }
            },
            [member](PipelineConfig& c, std::string_view v) { c.*member = parse_value<T>(v); }};
}

template <typename Owner, typename T>
Field nested_field(std::string key, Owner PipelineConfig::*owner, T Owner::*member) {
    return {std::move(key),
            [owner, member](const PipelineConfig& c) {
                if constexpr (std::is_floating_point_v<T>) {
                    return format_number(c.*owner.*member);
                } else {
                    return std::to_string(c.*owner.*member);
                }
            },
            [owner, member](PipelineConfig& c, std::string_view v) {
                c.*owner.*member = parse_value<T>(v);
            }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(nested_field("camera.width", &PipelineConfig::camera, &Resolution::width));
        f.push_back(nested_field("camera.height", &PipelineConfig::camera, &Resolution::height));
        f.push_back(nested_field("screen.width", &PipelineConfig::screen, &Resolution::width));
        f.push_back(nested_field("screen.height", &PipelineConfig::screen, &Resolution::height));
        f.push_back(number_field("fps", &PipelineConfig::fps));
        f.push_back({"mode",
                     [](const PipelineConfig& c) { return std::string(to_string(c.mode)); },
                     [](PipelineConfig& c, std::string_view v) {
                         const auto m = parse_pointer_mode(v);
                         if (!m) {
                             throw std::invalid_argument("mode must be ABSOLUTE or SPEED");
                         }
                         c.mode = *m;
                     }});
        for (auto [prefix, target] : {std::pair{"yellow", &PipelineConfig::yellow},
                                      std::pair{"red", &PipelineConfig::red}}) {
            const std::string p = prefix;
            f.push_back(nested_field(p + ".hue_center", target, &ColorTarget::hue_center));
            f.push_back(nested_field(p + ".hue_tol", target, &ColorTarget::hue_tol));
            f.push_back(nested_field(p + ".sat_min", target, &ColorTarget::sat_min));
            f.push_back(nested_field(p + ".val_min", target, &ColorTarget::val_min));
        }
        f.push_back(number_field("background.frames", &PipelineConfig::background_frames));
        f.push_back(number_field("background.threshold", &PipelineConfig::bg_threshold));
        f.push_back({"skin.enabled",
                     [](const PipelineConfig& c) { return std::string(c.skin_enabled ? "true" : "false"); },
                     [](PipelineConfig& c, std::string_view v) { c.skin_enabled = parse_bool(v); }});
        f.push_back({"skin.histogram_path",
                     [](const PipelineConfig& c) { return c.skin_histogram_path; },
                     [](PipelineConfig& c, std::string_view v) { c.skin_histogram_path = std::string(v); }});
        f.push_back(number_field("skin.theta", &PipelineConfig::theta));
        f.push_back(number_field("denoise.window", &PipelineConfig::denoise_window));
        f.push_back(number_field("denoise.majority", &PipelineConfig::denoise_majority));
        f.push_back(number_field("tracking.min_blob_area", &PipelineConfig::min_blob_area));
        f.push_back({"tracking.connectivity",
                     [](const PipelineConfig& c) {
                         return std::to_string(static_cast<int>(c.connectivity));
                     },
                     [](PipelineConfig& c, std::string_view v) {
                         const int n = parse_value<int>(v);
                         if (n != 4 && n != 8) {
                             throw std::invalid_argument("connectivity must be 4 or 8");
                         }
                         c.connectivity = n == 4 ? Connectivity::Four : Connectivity::Eight;
                     }});
        f.push_back(nested_field("gesture.dwell_ms", &PipelineConfig::gesture, &GestureConfig::dwell_ms));
        f.push_back(nested_field("gesture.stationary_radius_px", &PipelineConfig::gesture,
                                 &GestureConfig::stationary_radius_px));
        f.push_back(nested_field("gesture.min_calibration_frames", &PipelineConfig::gesture,
                                 &GestureConfig::min_calibration_frames));
        f.push_back(number_field("speed.gain", &PipelineConfig::gain));
        f.push_back(number_field("speed.exponent", &PipelineConfig::exponent));
        return f;
    }();
    return table;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

PipelineConfig parse_config(std::string_view text, PipelineConfig base) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto& table = fields();
        const auto it = std::find_if(table.begin(), table.end(),
                                     [&](const Field& f) { return f.key == key; });
        if (it == table.end()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                              std::string(key) + "'");
        }
        try {
            it->set(base, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("config line " + std::to_string(line_no) + " (" + std::string(key) +
                              "): " + e.what());
        }
    }
    return base;
}

std::string render_config(const PipelineConfig& cfg) {
    std::string out;
    for (const Field& f : fields()) {
        out += f.key;
        out += '=';
        out += f.get(cfg);
        out += '\n';
    }
    return out;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    PipelineConfig cfg = parse_config(text);
    cfg.validate();
    return cfg;
}

}  // namespace tapemouse
