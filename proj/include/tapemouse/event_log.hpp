#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tapemouse/gestures.hpp"

namespace tapemouse {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Event log lines are `<t_ms> <KIND> <x> <y>\n`.
std::string format_event(const MouseEvent& e);
std::string render_event_log(std::span<const MouseEvent> events);

/// Accepts only canonical lines; timestamps must be non-decreasing.
std::vector<MouseEvent> parse_event_log(std::string_view text);

// Calibration files hold `D=<float>` and `D_prime=<float>` lines.
std::string render_calibration(const Calibration& cal);
Calibration parse_calibration(std::string_view text);
Calibration load_calibration(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace tapemouse
