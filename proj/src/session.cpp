#include "tapemouse/session.hpp"

#include <cstdio>
#include <limits>

#include "tapemouse/event_log.hpp"

namespace tapemouse {

std::string encode_frame_message(const Frame& frame) {
    if (frame.width() > 0xFFFF || frame.height() > 0xFFFF) {
        throw FrameError("frame too large for the wire format");
    }
    std::string out;
    out.reserve(kFrameHeaderBytes + frame.data().size());
    out.push_back(static_cast<char>(kFrameMessageTag));
    const auto put = [&out](std::uint64_t v, int bytes) {
        for (int i = bytes - 1; i >= 0; --i) {
            out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        }
    };
    put(frame.width(), 2);
    put(frame.height(), 2);
    put(static_cast<std::uint64_t>(frame.timestamp_ms()), 8);
    const auto px = frame.data();
    out.append(reinterpret_cast<const char*>(px.data()), px.size());
    return out;
}

Frame decode_frame_message(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kFrameHeaderBytes) {
        throw FrameError("frame message shorter than its header");
    }
    if (bytes[0] != kFrameMessageTag) {
        throw FrameError("unknown binary message tag");
    }
    const auto get = [&bytes](std::size_t offset, int n) {
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v = (v << 8) | bytes[offset + static_cast<std::size_t>(i)];
        }
        return v;
    };
    const std::size_t width = get(1, 2);
    const std::size_t height = get(3, 2);
    const std::uint64_t t = get(5, 8);
    if (width == 0 || height == 0) {
        throw FrameError("frame header has a zero dimension");
    }
    if (t > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        throw FrameError("frame timestamp out of range");
    }
    const std::size_t expected = width * height * 3;
    if (bytes.size() - kFrameHeaderBytes != expected) {
        throw FrameError("header says " + std::to_string(width) + "x" + std::to_string(height) +
                         " (" + std::to_string(expected) + " bytes), payload has " +
                         std::to_string(bytes.size() - kFrameHeaderBytes));
    }
    const auto payload = bytes.subspan(kFrameHeaderBytes);
    return Frame(width, height, std::vector<std::uint8_t>(payload.begin(), payload.end()),
                 static_cast<std::int64_t>(t));
}

std::string_view to_string(Session::Phase phase) noexcept {
    switch (phase) {
        case Session::Phase::Idle: return "IDLE";
        case Session::Phase::CalibratingOpen: return "CALIBRATING_OPEN";
        case Session::Phase::CalibratingPinch: return "CALIBRATING_PINCH";
        case Session::Phase::Streaming: return "STREAMING";
    }
    return "IDLE";
}

std::string format_state(const FrameResult& r) {
    char d[32];
    if (r.distance) {
        std::snprintf(d, sizeof d, "%.2f", *r.distance);
    } else {
        std::snprintf(d, sizeof d, "-1");
    }
    return "STATE " + std::string(to_string(r.region)) + " " + d + " " +
           std::to_string(r.dwell_remaining_ms);
}

namespace {

SessionReply error(std::string_view code, const std::string& detail, bool close) {
    return {{"ERR " + std::string(code) + " " + detail}, close};
}

std::string_view calibration_code(CalibrationErrorKind kind) {
    switch (kind) {
        case CalibrationErrorKind::TooFewFrames: return "CAL_TOO_FEW_FRAMES";
        case CalibrationErrorKind::Ordering: return "CAL_ORDER";
        case CalibrationErrorKind::NonPositive: return "CAL_NONPOSITIVE";
    }
    return "CAL_FAILED";
}

}  // namespace

Session::Session(const PipelineConfig& cfg) : cfg_(cfg), detector_(cfg) {}

SessionReply Session::on_text(std::string_view message) {
    while (!message.empty() && (message.back() == '\n' || message.back() == '\r')) {
        message.remove_suffix(1);
    }
    const auto out_of_phase = [&] {
        return error("BAD_SEQUENCE",
                     std::string(message) + " not allowed while " + std::string(to_string(phase_)),
                     true);
    };

    if (message == "CALIBRATE_OPEN_BEGIN") {
        return phase_ == Phase::Idle ? begin_phase(Phase::CalibratingOpen) : out_of_phase();
    }
    if (message == "CALIBRATE_PINCH_BEGIN") {
        if (phase_ != Phase::Idle) {
            return out_of_phase();
        }
        if (!open_distance_) {
            return error("NOT_CALIBRATED", "open pose must be calibrated first", false);
        }
        return begin_phase(Phase::CalibratingPinch);
    }
    if (message == "CALIBRATE_OPEN_END") {
        return phase_ == Phase::CalibratingOpen ? finish_calibration() : out_of_phase();
    }
    if (message == "CALIBRATE_PINCH_END") {
        return phase_ == Phase::CalibratingPinch ? finish_calibration() : out_of_phase();
    }
    if (message == "STREAM_BEGIN") {
        if (phase_ != Phase::Idle) {
            return out_of_phase();
        }
        if (!calibration_) {
            return error("NOT_CALIBRATED", "both poses must be calibrated before streaming", false);
        }
        return begin_phase(Phase::Streaming);
    }
    if (message == "STREAM_END") {
        if (phase_ != Phase::Streaming) {
            return out_of_phase();
        }
        engine_.reset();
        phase_ = Phase::Idle;
        return {};
    }
    return error("BAD_COMMAND", "unknown command '" + std::string(message) + "'", true);
}

SessionReply Session::begin_phase(Phase next) {
    if (detector_.needs_background()) {
        if (idle_frames_.size() < cfg_.background_frames) {
            return error("NO_BACKGROUND",
                         "need " + std::to_string(cfg_.background_frames) +
                             " idle frames before calibrating or streaming, have " +
                             std::to_string(idle_frames_.size()),
                         false);
        }
        const std::vector<Frame> frames(idle_frames_.begin(), idle_frames_.end());
        detector_.set_background(capture_background(frames));
    }
    pairs_.clear();
    if (next == Phase::Streaming) {
        engine_.emplace(cfg_, *calibration_);
    }
    phase_ = next;
    return {};
}

SessionReply Session::finish_calibration() {
    const Phase finished = phase_;
    phase_ = Phase::Idle;
    std::vector<MarkerPair> pairs;
    pairs.swap(pairs_);
    try {
        if (finished == Phase::CalibratingOpen) {
            const double d = calibrate_open(pairs, cfg_.gesture);
            open_distance_ = d;
            calibration_.reset();
            return {{"CAL_OPEN " + format_number(d)}, false};
        }
        const double d = calibrate_pinch(pairs, cfg_.gesture, *open_distance_);
        calibration_ = Calibration{*open_distance_, d};
        return {{"CAL_PINCH " + format_number(d)}, false};
    } catch (const CalibrationError& e) {
        return error(calibration_code(e.kind()), e.what(), false);
    }
}

SessionReply Session::on_binary(std::span<const std::uint8_t> message) {
    try {
        Frame frame = decode_frame_message(message);
        if (frame.width() != static_cast<std::size_t>(cfg_.camera.width) ||
            frame.height() != static_cast<std::size_t>(cfg_.camera.height)) {
            throw FrameError("frame is " + std::to_string(frame.width()) + "x" +
                             std::to_string(frame.height()) + ", session expects " +
                             std::to_string(cfg_.camera.width) + "x" +
                             std::to_string(cfg_.camera.height));
        }

        switch (phase_) {
            case Phase::Idle:
                if (detector_.needs_background()) {
                    idle_frames_.push_back(std::move(frame));
                    while (idle_frames_.size() > cfg_.background_frames) {
                        idle_frames_.pop_front();
                    }
                }
                return {};
            case Phase::CalibratingOpen:
            case Phase::CalibratingPinch: {
                const Detection d = detector_.detect(frame);
                pairs_.push_back({d.yellow, d.red});
                return {};
            }
            case Phase::Streaming: {
                const FrameResult r = engine_->step(detector_.detect(frame), frame.timestamp_ms());
                SessionReply reply;
                for (const MouseEvent& e : r.events) {
                    std::string line = format_event(e);
                    line.pop_back();
                    reply.messages.push_back("EVT " + line);
                }
                reply.messages.push_back(format_state(r));
                return reply;
            }
        }
    } catch (const FrameError& e) {
        return error("BAD_FRAME", e.what(), true);
    }
    return {};
}

}  // namespace tapemouse
