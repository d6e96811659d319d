#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tapemouse/config.hpp"
#include "tapemouse/gestures.hpp"
#include "tapemouse/imaging.hpp"
#include "tapemouse/pointer.hpp"
#include "tapemouse/segmentation.hpp"
#include "tapemouse/tracking.hpp"

namespace tapemouse {

class FrameSource {
public:
    virtual ~FrameSource() = default;
    /// Next frame in stream order, or nullopt at the end.
    virtual std::optional<Frame> next() = 0;
};

class VectorFrameSource final : public FrameSource {
public:
    explicit VectorFrameSource(std::vector<Frame> frames) : frames_(std::move(frames)) {}
    std::optional<Frame> next() override;

private:
    std::vector<Frame> frames_;
    std::size_t pos_ = 0;
};

/// frame_*.ppm files of a directory in lexicographic order, stamped
/// index * 1000 / fps.
class DirectoryFrameSource final : public FrameSource {
public:
    DirectoryFrameSource(const std::filesystem::path& dir, int fps);
    std::optional<Frame> next() override;
    std::size_t size() const noexcept { return files_.size(); }

private:
    std::vector<std::filesystem::path> files_;
    int fps_;
    std::size_t pos_ = 0;
};

std::vector<Frame> drain(FrameSource& source);

class FrameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Accumulated wall time per stage, in milliseconds.
struct StageTimings {
    double background_ms = 0.0;
    double skin_ms = 0.0;
    double color_ms = 0.0;
    double denoise_ms = 0.0;
    double tracking_ms = 0.0;
    double gesture_ms = 0.0;

    double total() const noexcept {
        return background_ms + skin_ms + color_ms + denoise_ms + tracking_ms + gesture_ms;
    }
};

struct Detection {
    MarkerObservation yellow = MarkerObservation::absent(MarkerId::Yellow);
    MarkerObservation red = MarkerObservation::absent(MarkerId::Red);
};

/// Per-frame tape detection: background subtraction, optional skin mask,
/// HSV tolerance masks, majority denoise, largest-blob extraction.
class Detector {
public:
    /// Loads the skin histogram when the config enables that stage.
    explicit Detector(const PipelineConfig& cfg);

    /// Required before detect() unless background.frames is 0.
    void set_background(BackgroundModel model);
    bool needs_background() const noexcept { return cfg_.background_frames > 0; }
    bool ready() const noexcept { return !needs_background() || background_.has_value(); }

    /// Throws FrameError when the frame does not match the camera resolution.
    Detection detect(const Frame& frame, StageTimings* timings = nullptr) const;

    const PipelineConfig& config() const noexcept { return cfg_; }

private:
    PipelineConfig cfg_;
    std::optional<ForegroundBounds> background_;
    std::optional<SkinHistogram> skin_;
};

struct FrameResult {
    std::vector<MouseEvent> events;  // MOVE first, then clicks
    Region region = Region::Undefined;
    std::optional<double> distance;
    std::int64_t dwell_remaining_ms = 0;
};

/// Pointer and gesture state for one stream.
class GestureEngine {
public:
    GestureEngine(const PipelineConfig& cfg, const Calibration& cal);

    /// Timestamps must be non-decreasing; throws FrameError otherwise.
    FrameResult step(const Detection& detection, std::int64_t t_ms);

    const PointerState& pointer() const noexcept { return pointer_; }
    const GestureState& gesture() const noexcept { return gesture_; }

private:
    PipelineConfig cfg_;
    Calibration cal_;
    PointerState pointer_;
    GestureState gesture_;
    std::optional<std::int64_t> last_t_;
};

/// The first `background.frames` frames of the source form the background
/// model and produce no events; every later frame runs the full pipeline.
std::vector<MouseEvent> run_pipeline(FrameSource& source, const PipelineConfig& cfg,
                                     const Calibration& cal, StageTimings* timings = nullptr);

/// The first `background.frames` frames of `open` form the background model
/// used for both poses.
Calibration run_calibration(FrameSource& open, FrameSource& pinch, const PipelineConfig& cfg);

std::vector<MarkerPair> detect_pairs(const Detector& detector, std::span<const Frame> frames);

struct BenchReport {
    std::size_t frames = 0;  // frames through the full pipeline
    double elapsed_ms = 0.0;
    double fps = 0.0;
    StageTimings stage_mean_ms;
};

inline constexpr std::size_t kMinBenchFrames = 100;

/// Times the full pipeline over frames already in memory. Needs at least
/// kMinBenchFrames frames after the background frames.
BenchReport bench(std::span<const Frame> frames, const PipelineConfig& cfg,
                  const Calibration& cal);

/// Stand-in calibration for benchmarking without a calibration file.
Calibration nominal_calibration(const PipelineConfig& cfg);

}  // namespace tapemouse
