#include "tapemouse/gestures.hpp"

#include <algorithm>
#include <cmath>

namespace tapemouse {

void Calibration::validate() const {
    if (!(pinch_distance > 0.0 && open_distance > 0.0)) {
        throw CalibrationError(CalibrationErrorKind::NonPositive,
                               "calibration distances must be positive");
    }
    if (!(pinch_distance < open_distance)) {
        throw CalibrationError(CalibrationErrorKind::Ordering,
                               "pinch distance must be below open distance");
    }
}

void GestureConfig::validate() const {
    if (dwell_ms <= 0) {
        throw std::invalid_argument("gesture.dwell_ms must be positive");
    }
    if (!(stationary_radius_px >= 0.0)) {
        throw std::invalid_argument("gesture.stationary_radius_px must be non-negative");
    }
}

namespace {

double median_distance(std::span<const MarkerPair> observations, const GestureConfig& cfg,
                        std::string_view pose) {
    std::vector<double> d;
    d.reserve(observations.size());
    for (const MarkerPair& p : observations) {
        if (auto dist = marker_distance(p.yellow, p.red)) {
            d.push_back(*dist);
        }
    }
    if (d.empty() || d.size() < cfg.min_calibration_frames) {
        throw CalibrationError(CalibrationErrorKind::TooFewFrames,
                               std::string(pose) + " calibration: " + std::to_string(d.size()) +
                                   " frames with both tapes, need " +
                                   std::to_string(std::max<std::size_t>(cfg.min_calibration_frames, 1)));
    }
    std::sort(d.begin(), d.end());
    const std::size_t mid = d.size() / 2;
    const double m = d.size() % 2 == 1 ? d[mid] : (d[mid - 1] + d[mid]) / 2.0;
    if (!(m > 0.0)) {
        throw CalibrationError(CalibrationErrorKind::NonPositive,
                               std::string(pose) + " calibration: median distance is zero");
    }
    return m;
}

bool within(Point2d a, Point2d b, double radius) {
    return std::hypot(a.x - b.x, a.y - b.y) <= radius;
}

}  // namespace

double calibrate_open(std::span<const MarkerPair> observations, const GestureConfig& cfg) {
    return median_distance(observations, cfg, "open");
}

double calibrate_pinch(std::span<const MarkerPair> observations, const GestureConfig& cfg,
                       double open_distance) {
    const double m = median_distance(observations, cfg, "pinch");
    if (!(m < open_distance)) {
        throw CalibrationError(CalibrationErrorKind::Ordering,
                               "pinch calibration: median " + std::to_string(m) +
                                   " is not below open distance " + std::to_string(open_distance));
    }
    return m;
}

std::string_view to_string(Region r) noexcept {
    switch (r) {
        case Region::Open: return "OPEN";
        case Region::Mid: return "MID";
        case Region::Pinch: return "PINCH";
        case Region::Undefined: break;
    }
    return "UNDEFINED";
}

Region classify_region(double d, const Calibration& cal) noexcept {
    if (d <= cal.pinch_distance) {
        return Region::Pinch;
    }
    if (d <= cal.open_distance) {
        return Region::Mid;
    }
    return Region::Open;
}

std::string_view to_string(EventKind k) noexcept {
    switch (k) {
        case EventKind::Move: return "MOVE";
        case EventKind::LeftClick: return "LEFT_CLICK";
        case EventKind::RightClick: return "RIGHT_CLICK";
        case EventKind::DoubleClick: return "DOUBLE_CLICK";
    }
    return "MOVE";
}

std::optional<EventKind> parse_event_kind(std::string_view text) noexcept {
    for (EventKind k : {EventKind::Move, EventKind::LeftClick, EventKind::RightClick,
                        EventKind::DoubleClick}) {
        if (text == to_string(k)) {
            return k;
        }
    }
    return std::nullopt;
}

GestureStep gesture_step(const GestureState& state, const MarkerObservation& yellow,
                         const MarkerObservation& red, std::int64_t t_ms, const Calibration& cal,
                         const GestureConfig& cfg, ScreenPoint pointer_pos) {
    GestureStep step;
    step.state = state;
    step.state.last_region = state.region;

    step.distance = marker_distance(yellow, red);
    if (!step.distance) {
        step.state.region = Region::Undefined;
        step.state.dwell.reset();
        step.state.pinch_latched = false;
        return step;
    }

    const Region region = classify_region(*step.distance, cal);
    const auto emit = [&](EventKind kind) {
        step.events.push_back({t_ms, kind, pointer_pos.x, pointer_pos.y});
    };
    const auto restart_dwell = [&] {
        step.state.dwell = DwellAnchor{yellow.centroid, red.centroid, t_ms, false};
    };

    GestureState& next = step.state;
    next.region = region;

    if (region != state.region) {
        next.pinch_latched = false;
        if (region == Region::Pinch) {
            emit(EventKind::LeftClick);
        }
        if (region == Region::Mid || region == Region::Pinch) {
            restart_dwell();
        } else {
            next.dwell.reset();
        }
        return step;
    }

    if (region == Region::Open || !next.dwell) {
        return step;
    }

    DwellAnchor& anchor = *next.dwell;
    const double radius = cfg.stationary_radius_px;
    bool still = within(yellow.centroid, anchor.yellow, radius);
    if (region == Region::Pinch) {
        still = still && within(red.centroid, anchor.red, radius);
    }
    if (!still) {
        restart_dwell();
        return step;
    }
    if (t_ms - anchor.start_ms < cfg.dwell_ms) {
        return step;
    }
    if (region == Region::Mid && !anchor.fired) {
        anchor.fired = true;
        emit(EventKind::RightClick);
    } else if (region == Region::Pinch && !next.pinch_latched) {
        next.pinch_latched = true;
        emit(EventKind::DoubleClick);
    }
    return step;
}

std::int64_t dwell_remaining_ms(const GestureState& state, std::int64_t t_ms,
                                const GestureConfig& cfg) noexcept {
    if (!state.dwell) {
        return cfg.dwell_ms;
    }
    const bool fired = state.region == Region::Pinch ? state.pinch_latched : state.dwell->fired;
    if (fired) {
        return 0;
    }
    return std::max<std::int64_t>(0, cfg.dwell_ms - (t_ms - state.dwell->start_ms));
}

}  // namespace tapemouse
