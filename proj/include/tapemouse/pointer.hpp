#pragma once

#include <optional>
#include <string_view>

#include "tapemouse/imaging.hpp"
#include "tapemouse/tracking.hpp"

namespace tapemouse {

struct Resolution {
    int width = 1;
    int height = 1;

    void validate() const;
    friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct ScreenPoint {
    int x = 0;
    int y = 0;

    friend bool operator==(const ScreenPoint&, const ScreenPoint&) = default;
};

struct ScreenDelta {
    int dx = 0;
    int dy = 0;

    friend bool operator==(const ScreenDelta&, const ScreenDelta&) = default;
};

enum class PointerMode { Absolute, Speed };

std::string_view to_string(PointerMode mode) noexcept;
std::optional<PointerMode> parse_pointer_mode(std::string_view text) noexcept;

/// sx = floor(x * sw / cw), sy = floor(y * sh / ch), clamped to the screen.
/// With a screen four times the camera width every camera pixel step moves
/// the cursor by exactly four screen pixels.
ScreenPoint map_absolute(Point2d cam, Resolution cam_res, Resolution screen_res);

/// Relative control: delta = gain * |v|^(exponent - 1) * v with v = cur - prev,
/// rounded per axis to the nearest integer (halves away from zero).
ScreenDelta map_weighted_speed(Point2d prev, Point2d cur, double gain, double exponent);

struct PointerSettings {
    PointerMode mode = PointerMode::Absolute;
    Resolution camera{640, 480};
    Resolution screen{1920, 1080};
    double gain = 1.5;
    double exponent = 1.3;
};

struct PointerState {
    ScreenPoint screen_pos;
    std::optional<Point2d> prev_cam_pos;

    /// Cursor parked at the screen centre, no camera history.
    static PointerState centred(Resolution screen) {
        return {{screen.width / 2, screen.height / 2}, std::nullopt};
    }
};

struct PointerStep {
    PointerState state;
    std::optional<ScreenPoint> move;  // set iff screen_pos changed
};

PointerStep step_pointer(const PointerState& state, const MarkerObservation& yellow,
                         const PointerSettings& settings);

}  // namespace tapemouse
