#include "tapemouse/scenario.hpp"

namespace tapemouse::scenario {

namespace {

// Static clutter: one square per tape colour in the lower corners.
void paint_clutter(Frame& f) {
    for (std::size_t y = 420; y < 460; ++y) {
        for (std::size_t x = 20; x < 60; ++x) {
            f.set(x, y, kRedTape);
        }
        for (std::size_t x = 580; x < 620; ++x) {
            f.set(x, y, kYellowTape);
        }
    }
}

}  // namespace

Frame render(const std::optional<Hand>& hand, std::int64_t timestamp_ms) {
    std::vector<DiskSpec> disks;
    if (hand) {
        disks.push_back({hand->yellow, kTapeRadius, kYellowTape});
        if (hand->red) {
            disks.push_back({*hand->red, kTapeRadius, kRedTape});
        }
    }
    Frame f = synth_frame(kWidth, kHeight, kBackdrop, disks, timestamp_ms);
    paint_clutter(f);
    return f;
}

std::vector<Frame> pose(double distance, std::size_t count, int fps) {
    std::vector<Frame> frames;
    const Point2d yellow{320.0, 140.0};
    for (std::size_t i = 0; i < count; ++i) {
        frames.push_back(render(Hand{yellow, Point2d{yellow.x, yellow.y + distance}},
                                frame_timestamp_ms(i, fps)));
    }
    return frames;
}

std::vector<Frame> empty_workspace(std::size_t count, int fps) {
    std::vector<Frame> frames;
    for (std::size_t i = 0; i < count; ++i) {
        frames.push_back(render(std::nullopt, frame_timestamp_ms(i, fps)));
    }
    return frames;
}

std::vector<Frame> scripted_session(int fps) {
    std::vector<Frame> frames;
    const auto hand_at = [](double x, double y, double red_offset) {
        return Hand{{x, y}, Point2d{x, y + red_offset}};
    };
    for (std::size_t i = 0; i < 300; ++i) {
        std::optional<Hand> hand;
        if (i >= 2 && i < 62) {
            hand = hand_at(100.0 + 6.0 * static_cast<double>(i - 2), 120.0, 220.0);
        } else if (i >= 62 && i < 65) {
            constexpr double closing[] = {160.0, 120.0, 80.0};
            hand = hand_at(454.0, 120.0, closing[i - 62]);
        } else if (i >= 65 && i < 145) {
            hand = hand_at(454.0, 120.0, 35.0);
        } else if (i >= 145 && i < 260) {
            hand = hand_at(454.0, 120.0, 100.0);
        }
        frames.push_back(render(hand, frame_timestamp_ms(i, fps)));
    }
    return frames;
}

void write_sequence(const std::filesystem::path& dir, std::span<const Frame> frames) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        write_ppm_file(dir / frame_file_name(i + 1), frames[i]);
    }
}

}  // namespace tapemouse::scenario
