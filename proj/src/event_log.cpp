#include "tapemouse/event_log.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <optional>

#include "tapemouse/config.hpp"

namespace tapemouse {

std::string format_event(const MouseEvent& e) {
    std::string line = std::to_string(e.t_ms);
    line += ' ';
    line += to_string(e.kind);
    line += ' ';
    line += std::to_string(e.x);
    line += ' ';
    line += std::to_string(e.y);
    line += '\n';
    return line;
}

std::string render_event_log(std::span<const MouseEvent> events) {
    std::string out;
    for (const MouseEvent& e : events) {
        out += format_event(e);
    }
    return out;
}

namespace {

template <typename T>
std::optional<T> number(std::string_view s) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto sp = line.find(' ', start);
        parts.push_back(line.substr(start, sp - start));
        if (sp == std::string_view::npos) {
            break;
        }
        start = sp + 1;
    }
    return parts;
}

}  // namespace

std::vector<MouseEvent> parse_event_log(std::string_view text) {
    std::vector<MouseEvent> events;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        if (nl == std::string_view::npos) {
            throw FormatError("event log line " + std::to_string(line_no) + ": missing newline");
        }
        const std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl + 1);

        const auto parts = split_spaces(line);
        const auto fail = [&](const char* why) {
            return FormatError("event log line " + std::to_string(line_no) + ": " + why);
        };
        if (parts.size() != 4) {
            throw fail("expected '<t_ms> <KIND> <x> <y>'");
        }
        const auto t = number<std::int64_t>(parts[0]);
        const auto kind = parse_event_kind(parts[1]);
        const auto x = number<int>(parts[2]);
        const auto y = number<int>(parts[3]);
        if (!t || !kind || !x || !y) {
            throw fail("unparsable field");
        }
        MouseEvent e{*t, *kind, *x, *y};
        // Reject "007" and "+1" style spellings.
        if (format_event(e) != std::string(line) + '\n') {
            throw fail("non-canonical number");
        }
        if (!events.empty() && e.t_ms < events.back().t_ms) {
            throw fail("timestamps must be non-decreasing");
        }
        events.push_back(e);
    }
    return events;
}

std::string render_calibration(const Calibration& cal) {
    return "D=" + format_number(cal.open_distance) + "\nD_prime=" +
           format_number(cal.pinch_distance) + "\n";
}

Calibration parse_calibration(std::string_view text) {
    std::optional<double> open, pinch;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw FormatError("calibration: expected key=value, got '" + std::string(line) + "'");
        }
        const std::string_view key = line.substr(0, eq);
        const auto value = number<double>(line.substr(eq + 1));
        if (!value) {
            throw FormatError("calibration: bad number for " + std::string(key));
        }
        if (key == "D") {
            open = value;
        } else if (key == "D_prime") {
            pinch = value;
        } else {
            throw FormatError("calibration: unknown key " + std::string(key));
        }
    }
    if (!open || !pinch) {
        throw FormatError("calibration: both D and D_prime are required");
    }
    Calibration cal{*open, *pinch};
    cal.validate();
    return cal;
}

Calibration load_calibration(const std::filesystem::path& path) {
    return parse_calibration(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace tapemouse
