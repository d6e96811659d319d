#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "tapemouse/imaging.hpp"

namespace tapemouse::scenario {

// Synthetic 640x480 workspace: a flat backdrop with static yellow and red
// clutter that only background subtraction removes, plus two tape disks.
inline constexpr std::size_t kWidth = 640;
inline constexpr std::size_t kHeight = 480;
inline constexpr double kTapeRadius = 12.0;
inline constexpr Rgb8 kBackdrop{40, 60, 90};
inline constexpr Rgb8 kYellowTape{255, 255, 0};
inline constexpr Rgb8 kRedTape{255, 0, 0};

struct Hand {
    Point2d yellow;
    std::optional<Point2d> red;
};

/// Workspace with the given tapes; no hand means the empty workspace.
Frame render(const std::optional<Hand>& hand, std::int64_t timestamp_ms = 0);

/// `count` frames of a still hand with the red tape `distance` pixels below
/// the yellow one, stamped index * 1000 / fps.
std::vector<Frame> pose(double distance, std::size_t count, int fps);

std::vector<Frame> empty_workspace(std::size_t count, int fps);

/// The 300-frame scripted session (timed for 10 fps): two empty frames,
/// a sweep with the hand open, a closing pinch held still, release to the
/// middle distance held still, then the hand leaves.
std::vector<Frame> scripted_session(int fps = 10);

/// Writes frame_000001.ppm, frame_000002.ppm, ... into `dir`.
void write_sequence(const std::filesystem::path& dir, std::span<const Frame> frames);

}  // namespace tapemouse::scenario
