#include "tapemouse/pipeline.hpp"

#include <chrono>
#include <cmath>

namespace tapemouse {

std::optional<Frame> VectorFrameSource::next() {
    if (pos_ >= frames_.size()) {
        return std::nullopt;
    }
    return frames_[pos_++];
}

DirectoryFrameSource::DirectoryFrameSource(const std::filesystem::path& dir, int fps)
    : files_(list_frame_files(dir)), fps_(fps) {
    if (fps <= 0) {
        throw std::invalid_argument("fps must be positive");
    }
}

std::optional<Frame> DirectoryFrameSource::next() {
    if (pos_ >= files_.size()) {
        return std::nullopt;
    }
    const std::size_t index = pos_++;
    Frame frame = [&] {
        try {
            return read_ppm_file(files_[index]);
        } catch (const std::exception& e) {
            throw FrameError(files_[index].string() + ": " + e.what());
        }
    }();
    frame.set_timestamp_ms(frame_timestamp_ms(index, fps_));
    return frame;
}

std::vector<Frame> drain(FrameSource& source) {
    std::vector<Frame> frames;
    while (auto f = source.next()) {
        frames.push_back(std::move(*f));
    }
    return frames;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Adds the elapsed time of a scope to one StageTimings slot.
class StageTimer {
public:
    StageTimer(StageTimings* timings, double StageTimings::*slot)
        : timings_(timings), slot_(slot), start_(Clock::now()) {}
    ~StageTimer() {
        if (timings_ != nullptr) {
            timings_->*slot_ += ms_since(start_);
        }
    }
    StageTimer(const StageTimer&) = delete;
    StageTimer& operator=(const StageTimer&) = delete;

private:
    StageTimings* timings_;
    double StageTimings::*slot_;
    Clock::time_point start_;
};

void check_dimensions(const Frame& frame, Resolution camera) {
    if (frame.width() != static_cast<std::size_t>(camera.width) ||
        frame.height() != static_cast<std::size_t>(camera.height)) {
        throw FrameError("frame is " + std::to_string(frame.width()) + "x" +
                         std::to_string(frame.height()) + ", camera is configured as " +
                         std::to_string(camera.width) + "x" + std::to_string(camera.height));
    }
}

}  // namespace

Detector::Detector(const PipelineConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    if (cfg_.skin_enabled) {
        skin_ = load_skin_histogram(cfg_.skin_histogram_path);
        if (!skin_->has_counts()) {
            throw std::invalid_argument("skin histogram " + cfg_.skin_histogram_path +
                                        " holds no counts");
        }
    }
}

void Detector::set_background(BackgroundModel model) {
    if (model.width != static_cast<std::size_t>(cfg_.camera.width) ||
        model.height != static_cast<std::size_t>(cfg_.camera.height)) {
        throw FrameError("background model does not match the camera resolution");
    }
    background_ = foreground_bounds(model, cfg_.bg_threshold);
}

Detection Detector::detect(const Frame& frame, StageTimings* timings) const {
    check_dimensions(frame, cfg_.camera);
    if (!ready()) {
        throw std::logic_error("detector has no background model");
    }

    BinaryMask allowed(frame.width(), frame.height(), true);
    if (background_) {
        StageTimer t(timings, &StageTimings::background_ms);
        allowed = subtract_background(frame, *background_);
    }
    if (skin_) {
        StageTimer t(timings, &StageTimings::skin_ms);
        allowed = skin_mask(frame, *skin_, cfg_.theta, allowed);
    }

    std::optional<BinaryMask> yellow_mask, red_mask;
    {
        StageTimer t(timings, &StageTimings::color_ms);
        yellow_mask = color_mask(frame, cfg_.yellow, allowed);
        red_mask = color_mask(frame, cfg_.red, allowed);
    }
    {
        StageTimer t(timings, &StageTimings::denoise_ms);
        yellow_mask = denoise(*yellow_mask, cfg_.denoise_window, cfg_.denoise_majority);
        red_mask = denoise(*red_mask, cfg_.denoise_window, cfg_.denoise_majority);
    }

    StageTimer t(timings, &StageTimings::tracking_ms);
    const std::size_t min_area = cfg_.effective_min_blob_area();
    return {extract_marker(*yellow_mask, MarkerId::Yellow, min_area, cfg_.connectivity),
            extract_marker(*red_mask, MarkerId::Red, min_area, cfg_.connectivity)};
}

GestureEngine::GestureEngine(const PipelineConfig& cfg, const Calibration& cal)
    : cfg_(cfg), cal_(cal), pointer_(PointerState::centred(cfg.screen)) {
    cfg_.validate();
    cal_.validate();
}

FrameResult GestureEngine::step(const Detection& detection, std::int64_t t_ms) {
    if (last_t_ && t_ms < *last_t_) {
        throw FrameError("timestamp " + std::to_string(t_ms) + " precedes " +
                         std::to_string(*last_t_));
    }
    last_t_ = t_ms;

    FrameResult result;
    const PointerStep p = step_pointer(pointer_, detection.yellow, cfg_.pointer_settings());
    pointer_ = p.state;
    if (p.move) {
        result.events.push_back({t_ms, EventKind::Move, p.move->x, p.move->y});
    }

    GestureStep g = gesture_step(gesture_, detection.yellow, detection.red, t_ms, cal_,
                                 cfg_.gesture, pointer_.screen_pos);
    gesture_ = g.state;
    result.events.insert(result.events.end(), g.events.begin(), g.events.end());
    result.region = gesture_.region;
    result.distance = g.distance;
    result.dwell_remaining_ms = dwell_remaining_ms(gesture_, t_ms, cfg_.gesture);
    return result;
}

std::vector<MouseEvent> run_pipeline(FrameSource& source, const PipelineConfig& cfg,
                                     const Calibration& cal, StageTimings* timings) {
    Detector detector(cfg);
    GestureEngine engine(cfg, cal);
    std::vector<Frame> background;
    std::vector<MouseEvent> log;

    while (auto frame = source.next()) {
        if (!detector.ready()) {
            check_dimensions(*frame, cfg.camera);
            background.push_back(std::move(*frame));
            if (background.size() == cfg.background_frames) {
                detector.set_background(capture_background(background));
                background.clear();
            }
            continue;
        }
        const Detection det = detector.detect(*frame, timings);
        const auto start = Clock::now();
        FrameResult r = engine.step(det, frame->timestamp_ms());
        if (timings != nullptr) {
            timings->gesture_ms += ms_since(start);
        }
        log.insert(log.end(), r.events.begin(), r.events.end());
    }
    return log;
}

std::vector<MarkerPair> detect_pairs(const Detector& detector, std::span<const Frame> frames) {
    std::vector<MarkerPair> pairs;
    pairs.reserve(frames.size());
    for (const Frame& f : frames) {
        const Detection d = detector.detect(f);
        pairs.push_back({d.yellow, d.red});
    }
    return pairs;
}

Calibration run_calibration(FrameSource& open, FrameSource& pinch, const PipelineConfig& cfg) {
    std::vector<Frame> open_frames = drain(open);
    const std::vector<Frame> pinch_frames = drain(pinch);
    if (open_frames.size() <= cfg.background_frames) {
        throw CalibrationError(CalibrationErrorKind::TooFewFrames,
                               "open pose sequence has no frames after the background frames");
    }
    if (pinch_frames.empty()) {
        throw CalibrationError(CalibrationErrorKind::TooFewFrames, "pinch pose sequence is empty");
    }

    Detector detector(cfg);
    const auto split = open_frames.begin() + static_cast<std::ptrdiff_t>(cfg.background_frames);
    if (detector.needs_background()) {
        for (auto it = open_frames.begin(); it != split; ++it) {
            check_dimensions(*it, cfg.camera);
        }
        detector.set_background(
            capture_background(std::span<const Frame>(open_frames.begin(), split)));
    }

    const auto open_pairs = detect_pairs(detector, std::span<const Frame>(split, open_frames.end()));
    const auto pinch_pairs = detect_pairs(detector, pinch_frames);
    Calibration cal;
    cal.open_distance = calibrate_open(open_pairs, cfg.gesture);
    cal.pinch_distance = calibrate_pinch(pinch_pairs, cfg.gesture, cal.open_distance);
    return cal;
}

Calibration nominal_calibration(const PipelineConfig& cfg) {
    const double diagonal = std::hypot(cfg.camera.width, cfg.camera.height);
    return {diagonal / 4.0, diagonal / 20.0};
}

BenchReport bench(std::span<const Frame> frames, const PipelineConfig& cfg,
                  const Calibration& cal) {
    if (frames.size() < cfg.background_frames + kMinBenchFrames) {
        throw std::invalid_argument("bench needs at least " + std::to_string(kMinBenchFrames) +
                                    " frames after " + std::to_string(cfg.background_frames) +
                                    " background frames, got " + std::to_string(frames.size()));
    }
    Detector detector(cfg);
    GestureEngine engine(cfg, cal);
    const auto work = frames.subspan(cfg.background_frames);
    if (detector.needs_background()) {
        detector.set_background(capture_background(frames.first(cfg.background_frames)));
    }

    BenchReport report;
    StageTimings sums;
    const auto start = Clock::now();
    for (const Frame& f : work) {
        const Detection det = detector.detect(f, &sums);
        const auto g0 = Clock::now();
        engine.step(det, f.timestamp_ms());
        sums.gesture_ms += ms_since(g0);
    }
    report.elapsed_ms = ms_since(start);
    report.frames = work.size();
    report.fps = static_cast<double>(report.frames) / (report.elapsed_ms / 1000.0);

    const double n = static_cast<double>(report.frames);
    report.stage_mean_ms = {sums.background_ms / n, sums.skin_ms / n,    sums.color_ms / n,
                            sums.denoise_ms / n,    sums.tracking_ms / n, sums.gesture_ms / n};
    return report;
}

}  // namespace tapemouse
