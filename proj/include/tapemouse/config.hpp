#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "tapemouse/gestures.hpp"
#include "tapemouse/pointer.hpp"
#include "tapemouse/segmentation.hpp"
#include "tapemouse/tracking.hpp"

namespace tapemouse {

/// Every tunable of the pipeline. Defaults are the values shipped in
/// `config dump`; the file format is `key=value` lines with `#` comments.
struct PipelineConfig {
    Resolution camera{640, 480};
    Resolution screen{1920, 1080};
    int fps = 30;
    PointerMode mode = PointerMode::Absolute;

    ColorTarget yellow{60.0, 15.0, 0.4, 0.3};
    ColorTarget red{0.0, 15.0, 0.4, 0.3};

    std::size_t background_frames = 2;  // 0 disables background subtraction
    double bg_threshold = 25.0;

    bool skin_enabled = false;
    std::string skin_histogram_path;
    double theta = 0.5;

    int denoise_window = 3;
    double denoise_majority = 0.5;

    std::size_t min_blob_area = 20;  // at 640x480, scaled with resolution
    Connectivity connectivity = Connectivity::Eight;

    GestureConfig gesture;

    double gain = 1.5;
    double exponent = 1.3;

    void validate() const;
    PointerSettings pointer_settings() const;
    std::size_t effective_min_blob_area() const;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Applies `key=value` lines on top of `base`. Unknown keys and unparsable
/// values raise ConfigError naming the line.
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});
std::string render_config(const PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

}  // namespace tapemouse
