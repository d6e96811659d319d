#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tapemouse/pointer.hpp"
#include "tapemouse/tracking.hpp"

namespace tapemouse {

/// Calibrated tape distances in camera pixels. `open_distance` is recorded
/// with index finger and thumb spread as far as possible, `pinch_distance`
/// with the two brought together; pinch < open, both positive.
struct Calibration {
    double open_distance = 0.0;
    double pinch_distance = 0.0;

    void validate() const;
    friend bool operator==(const Calibration&, const Calibration&) = default;
};

struct GestureConfig {
    std::int64_t dwell_ms = 7000;
    double stationary_radius_px = 5.0;
    std::size_t min_calibration_frames = 10;

    void validate() const;
    friend bool operator==(const GestureConfig&, const GestureConfig&) = default;
};

enum class CalibrationErrorKind { TooFewFrames, Ordering, NonPositive };

class CalibrationError : public std::runtime_error {
public:
    CalibrationError(CalibrationErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    CalibrationErrorKind kind() const noexcept { return kind_; }

private:
    CalibrationErrorKind kind_;
};

struct MarkerPair {
    MarkerObservation yellow = MarkerObservation::absent(MarkerId::Yellow);
    MarkerObservation red = MarkerObservation::absent(MarkerId::Red);
};

/// Median marker distance over frames where both tapes are visible.
double calibrate_open(std::span<const MarkerPair> observations, const GestureConfig& cfg);
double calibrate_pinch(std::span<const MarkerPair> observations, const GestureConfig& cfg,
                       double open_distance);

enum class Region { Undefined, Open, Mid, Pinch };

std::string_view to_string(Region r) noexcept;

/// d <= pinch: Pinch; pinch < d <= open: Mid; d > open: Open.
Region classify_region(double d, const Calibration& cal) noexcept;

enum class EventKind { Move, LeftClick, RightClick, DoubleClick };

std::string_view to_string(EventKind k) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view text) noexcept;

struct MouseEvent {
    std::int64_t t_ms = 0;
    EventKind kind = EventKind::Move;
    int x = 0;
    int y = 0;

    friend bool operator==(const MouseEvent&, const MouseEvent&) = default;
};

/// Where the markers were when the current dwell timer started.
struct DwellAnchor {
    Point2d yellow;
    Point2d red;
    std::int64_t start_ms = 0;
    bool fired = false;  // right click already emitted for this Mid dwell
};

struct GestureState {
    Region region = Region::Undefined;
    Region last_region = Region::Undefined;
    bool pinch_latched = false;  // double click already emitted this pinch
    std::optional<DwellAnchor> dwell;
};

struct GestureStep {
    GestureState state;
    std::vector<MouseEvent> events;
    std::optional<double> distance;
};

GestureStep gesture_step(const GestureState& state, const MarkerObservation& yellow,
                         const MarkerObservation& red, std::int64_t t_ms, const Calibration& cal,
                         const GestureConfig& cfg, ScreenPoint pointer_pos);

/// Time left on the active dwell timer at `t_ms`; dwell_ms when no timer
/// runs, 0 once the timer's click has fired.
std::int64_t dwell_remaining_ms(const GestureState& state, std::int64_t t_ms,
                                const GestureConfig& cfg) noexcept;

}  // namespace tapemouse
