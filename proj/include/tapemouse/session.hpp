#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tapemouse/config.hpp"
#include "tapemouse/pipeline.hpp"

namespace tapemouse {

// Binary frame message: [0x01][width u16 BE][height u16 BE][timestamp_ms u64 BE][RGB8...]
inline constexpr std::uint8_t kFrameMessageTag = 0x01;
inline constexpr std::size_t kFrameHeaderBytes = 13;

std::string encode_frame_message(const Frame& frame);

/// Throws FrameError on a wrong tag, short header, zero dimension or a
/// payload whose length disagrees with the header.
Frame decode_frame_message(std::span<const std::uint8_t> bytes);

struct SessionReply {
    std::vector<std::string> messages;
    bool close = false;  // the transport closes after sending `messages`
};

/// One client connection's protocol state machine, independent of the
/// transport. Frames received while idle feed a rolling background buffer;
/// each calibration or stream phase starts from the most recent
/// `background.frames` idle frames.
///
/// Client text commands: CALIBRATE_OPEN_BEGIN / CALIBRATE_OPEN_END,
/// CALIBRATE_PINCH_BEGIN / CALIBRATE_PINCH_END, STREAM_BEGIN / STREAM_END.
/// Server replies: `CAL_OPEN <D>`, `CAL_PINCH <D'>`, `EVT <t> <KIND> <x> <y>`,
/// `STATE <region> <d> <dwell_ms_remaining>` (once per streamed frame) and
/// `ERR <code> <detail>`.
///
/// Calibration failures and commands that arrive too early (missing
/// background or calibration) are reported without closing. Malformed
/// frames, unknown commands and out-of-phase commands close the session.
class Session {
public:
    enum class Phase { Idle, CalibratingOpen, CalibratingPinch, Streaming };

    explicit Session(const PipelineConfig& cfg);

    SessionReply on_text(std::string_view message);
    SessionReply on_binary(std::span<const std::uint8_t> message);

    Phase phase() const noexcept { return phase_; }
    const std::optional<Calibration>& calibration() const noexcept { return calibration_; }

private:
    SessionReply begin_phase(Phase next);
    SessionReply finish_calibration();

    PipelineConfig cfg_;
    Detector detector_;
    Phase phase_ = Phase::Idle;
    std::deque<Frame> idle_frames_;
    std::vector<MarkerPair> pairs_;
    std::optional<double> open_distance_;
    std::optional<Calibration> calibration_;
    std::optional<GestureEngine> engine_;
};

std::string_view to_string(Session::Phase phase) noexcept;

/// `STATE` line for one streamed frame; d is printed with two decimals, or
/// -1 when a tape is missing.
std::string format_state(const FrameResult& r);

}  // namespace tapemouse
