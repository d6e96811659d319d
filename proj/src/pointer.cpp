#include "tapemouse/pointer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tapemouse {

void Resolution::validate() const {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("resolution must be at least 1x1");
    }
}

std::string_view to_string(PointerMode mode) noexcept {
    return mode == PointerMode::Absolute ? "ABSOLUTE" : "SPEED";
}

std::optional<PointerMode> parse_pointer_mode(std::string_view text) noexcept {
    if (text == "ABSOLUTE") {
        return PointerMode::Absolute;
    }
    if (text == "SPEED") {
        return PointerMode::Speed;
    }
    return std::nullopt;
}

namespace {

int scale_axis(double v, int cam, int screen) {
    const double scaled = std::floor(v * screen / cam);
    return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(screen - 1)));
}

ScreenPoint clamp_to(ScreenPoint p, Resolution screen) {
    return {std::clamp(p.x, 0, screen.width - 1), std::clamp(p.y, 0, screen.height - 1)};
}

}  // namespace

ScreenPoint map_absolute(Point2d cam, Resolution cam_res, Resolution screen_res) {
    return {scale_axis(cam.x, cam_res.width, screen_res.width),
            scale_axis(cam.y, cam_res.height, screen_res.height)};
}

ScreenDelta map_weighted_speed(Point2d prev, Point2d cur, double gain, double exponent) {
    const double vx = cur.x - prev.x;
    const double vy = cur.y - prev.y;
    const double len = std::hypot(vx, vy);
    if (len == 0.0) {
        return {};
    }
    const double k = gain * std::pow(len, exponent - 1.0);
    return {static_cast<int>(std::lround(k * vx)), static_cast<int>(std::lround(k * vy))};
}

PointerStep step_pointer(const PointerState& state, const MarkerObservation& yellow,
                         const PointerSettings& settings) {
    if (!yellow.present) {
        return {state, std::nullopt};
    }
    PointerState next = state;
    next.prev_cam_pos = yellow.centroid;
    if (settings.mode == PointerMode::Absolute) {
        next.screen_pos = map_absolute(yellow.centroid, settings.camera, settings.screen);
    } else if (state.prev_cam_pos) {
        const ScreenDelta d =
            map_weighted_speed(*state.prev_cam_pos, yellow.centroid, settings.gain, settings.exponent);
        next.screen_pos = clamp_to({state.screen_pos.x + d.dx, state.screen_pos.y + d.dy},
                                   settings.screen);
    }
    if (next.screen_pos == state.screen_pos) {
        return {next, std::nullopt};
    }
    return {next, next.screen_pos};
}

}  // namespace tapemouse
