// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Each check measures its own wall time against its budget.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "support/oracles.hpp"
#include "support/temp_dir.hpp"
#include "support/ws_client.hpp"
#include "tapemouse/config.hpp"
#include "tapemouse/event_log.hpp"
#include "tapemouse/pipeline.hpp"
#include "tapemouse/scenario.hpp"
#include "tapemouse/server.hpp"

using namespace tapemouse;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<Outcome()>& check) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = check();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > budget_s) {
        out.ok = false;
        out.detail += " [over budget]";
    }
    std::printf("%s %-28s %7.3fs / %5.1fs  %s\n", out.ok ? "PASS" : "FAIL", name, secs, budget_s,
                out.detail.c_str());
    std::fflush(stdout);
    failures += out.ok ? 0 : 1;
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const Calibration kCal{200.0, 40.0};

// Two background frames, then `count` frames of a still hand at tape
// distance `d`; hand frames are stamped index * 1000 / fps from t = 0.
std::vector<Frame> held_pose(double d, std::size_t count, int fps) {
    std::vector<Frame> frames = scenario::empty_workspace(2, fps);
    const Frame still = scenario::pose(d, 1, fps).front();
    const std::vector<std::uint8_t> px(still.data().begin(), still.data().end());
    for (std::size_t i = 0; i < count; ++i) {
        frames.emplace_back(still.width(), still.height(), px, frame_timestamp_ms(i, fps));
    }
    return frames;
}

std::optional<std::size_t> first_event_frame(const std::vector<MouseEvent>& log, EventKind kind,
                                             int fps) {
    for (const MouseEvent& e : log) {
        if (e.kind == kind) {
            for (std::size_t i = 0;; ++i) {
                if (frame_timestamp_ms(i, fps) == e.t_ms) {
                    return i;
                }
                if (frame_timestamp_ms(i, fps) > e.t_ms) {
                    return std::nullopt;
                }
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

Outcome jumping_pixels() {
    const Resolution cam{640, 480}, screen{2560, 1920};
    int off = 0, min_step = 1 << 30, max_step = 0;
    for (int x = 0; x < 639; ++x) {
        const int a = map_absolute({static_cast<double>(x), 240.0}, cam, screen).x;
        const int b = map_absolute({static_cast<double>(x + 1), 240.0}, cam, screen).x;
        min_step = std::min(min_step, b - a);
        max_step = std::max(max_step, b - a);
        off += (b - a) != 4;
    }
    return {off == 0, fmt("639 steps, step range [%d, %d] px, %d not 4 px", min_step, max_step, off)};
}

Outcome dwell(double distance, EventKind kind) {
    PipelineConfig cfg;  // 30 fps
    VectorFrameSource src(held_pose(distance, 240, cfg.fps));
    const auto log = run_pipeline(src, cfg, kCal);
    const auto frame = first_event_frame(log, kind, cfg.fps);
    std::size_t count = 0;
    for (const MouseEvent& e : log) {
        count += e.kind == kind;
    }
    if (!frame) {
        return {false, fmt("no %s emitted", std::string(to_string(kind)).c_str())};
    }
    const long delta = static_cast<long>(*frame) - 210;
    return {delta == 0 && count == 1,
            fmt("%s at frame %zu (t=%lld ms), expected 210; %zu emitted",
                std::string(to_string(kind)).c_str(), *frame,
                static_cast<long long>(frame_timestamp_ms(*frame, cfg.fps)), count)};
}

Outcome throughput() {
    PipelineConfig cfg;
    std::vector<Frame> frames = scenario::scripted_session(cfg.fps);
    const auto more = scenario::scripted_session(cfg.fps);
    frames.insert(frames.end(), more.begin() + 2, more.begin() + 102);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        frames[i] = Frame(640, 480,
                          std::vector<std::uint8_t>(frames[i].data().begin(), frames[i].data().end()),
                          frame_timestamp_ms(i, cfg.fps));
    }
    const BenchReport r = bench(frames, cfg, nominal_calibration(cfg));
    const StageTimings& s = r.stage_mean_ms;
    return {r.frames >= 300 && r.fps >= 15.0,
            fmt("%zu frames 640x480, %.1f fps (need >= 15); per frame ms: background %.3f, "
                "skin %.3f, color %.3f, denoise %.3f, tracking %.3f, gesture %.4f",
                r.frames, r.fps, s.background_ms, s.skin_ms, s.color_ms, s.denoise_ms,
                s.tracking_ms, s.gesture_ms)};
}

Outcome scenario_log() {
    PipelineConfig cfg;
    cfg.fps = 10;
    VectorFrameSource src(scenario::scripted_session(10));
    const std::string got = render_event_log(run_pipeline(src, cfg, kCal));
    const std::string want = oracle::scripted_session_log();
    std::size_t clicks = 0;
    for (const MouseEvent& e : parse_event_log(got)) {
        clicks += e.kind != EventKind::Move;
    }
    return {got == want, fmt("%zu bytes vs %zu expected, %zu clicks, %s", got.size(), want.size(),
                             clicks, got == want ? "byte-identical" : "MISMATCH")};
}

// ---------------------------------------------------------------------------
// Property suites

constexpr int kCases = 1000;

Frame random_frame(std::mt19937& rng, std::size_t w, std::size_t h) {
    std::vector<std::uint8_t> px(w * h * 3);
    for (auto& p : px) {
        p = static_cast<std::uint8_t>(rng());
    }
    return Frame(w, h, std::move(px));
}

Outcome prop_hsv_roundtrip() {
    std::mt19937 rng(101);
    int worst = 0;
    for (int i = 0; i < kCases; ++i) {
        const Rgb8 c{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
                     static_cast<std::uint8_t>(rng())};
        const HsvPixel p = rgb_to_hsv(c);
        const auto back = oracle::hsv_to_rgb(p.hue, p.saturation, p.value);
        worst = std::max({worst, std::abs(back.r - c.r), std::abs(back.g - c.g), std::abs(back.b - c.b)});
    }
    return {worst <= 1, fmt("%d cases, worst channel error %d/255", kCases, worst)};
}

Outcome prop_color_monotone() {
    std::mt19937 rng(102);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    for (int i = 0; i < kCases; ++i) {
        const Frame f = random_frame(rng, 16, 12);
        const ColorTarget narrow{u(rng) * 359.0, 1.0 + u(rng) * 90.0, u(rng), u(rng)};
        ColorTarget wide = narrow;
        wide.hue_tol = std::min(180.0, narrow.hue_tol + u(rng) * 90.0);
        wide.sat_min *= u(rng);
        wide.val_min *= u(rng);
        bad += !color_mask(f, narrow).is_subset_of(color_mask(f, wide));
    }
    return {bad == 0, fmt("%d cases, %d violations", kCases, bad)};
}

Outcome prop_background_monotone() {
    std::mt19937 rng(103);
    std::uniform_real_distribution<double> thr(0.0, 255.0);
    int bad = 0;
    for (int i = 0; i < kCases; ++i) {
        const Frame bgf = random_frame(rng, 16, 12);
        const Frame f = random_frame(rng, 16, 12);
        const BackgroundModel bg = capture_background(std::span(&bgf, 1));
        double lo = thr(rng), hi = thr(rng);
        if (lo > hi) {
            std::swap(lo, hi);
        }
        bad += !subtract_background(f, bg, hi).is_subset_of(subtract_background(f, bg, lo));
    }
    return {bad == 0, fmt("%d cases, %d violations", kCases, bad)};
}

Outcome prop_area_conservation() {
    std::mt19937 rng(104);
    int bad = 0;
    for (int i = 0; i < kCases; ++i) {
        const std::size_t w = 1 + rng() % 40, h = 1 + rng() % 40;
        std::bernoulli_distribution on(std::uniform_real_distribution<double>(0.05, 0.9)(rng));
        BinaryMask m(w, h);
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                m.set(x, y, on(rng));
            }
        }
        const auto conn = i % 2 ? Connectivity::Four : Connectivity::Eight;
        std::size_t total = 0;
        for (const Component& c : connected_components(m, conn)) {
            total += c.area;
        }
        bad += total != m.count();
    }
    return {bad == 0, fmt("%d cases, %d violations", kCases, bad)};
}

Outcome prop_disk_centroid() {
    std::mt19937 rng(105);
    std::uniform_real_distribution<double> radius(3.0, 30.0), cx(40.0, 600.0), cy(40.0, 440.0);
    PipelineConfig cfg;
    Detector detector(cfg);
    const Frame blank(640, 480);
    detector.set_background(capture_background(std::vector<Frame>{blank, blank}));
    double worst = 0.0;
    int missing = 0;
    for (int i = 0; i < kCases; ++i) {
        const DiskSpec disk{{cx(rng), cy(rng)}, radius(rng), scenario::kYellowTape};
        const Detection d = detector.detect(synth_frame(640, 480, Rgb8{0, 0, 0}, std::span(&disk, 1)));
        if (!d.yellow.present) {
            ++missing;
            continue;
        }
        worst = std::max(worst, std::hypot(d.yellow.centroid.x - disk.center.x,
                                           d.yellow.centroid.y - disk.center.y));
    }
    return {missing == 0 && worst <= 0.5,
            fmt("%d disks r in [3, 30], worst error %.4f px, %d undetected", kCases, worst, missing)};
}

Outcome prop_region_partition() {
    std::mt19937 rng(106);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    for (int i = 0; i < kCases; ++i) {
        const double open = 1.0 + u(rng) * 1000.0;
        const double pinch = open * u(rng);
        const double d = u(rng) * 2.0 * open;
        const Region r = classify_region(d, {open, pinch});
        const Region want = d <= pinch ? Region::Pinch : d <= open ? Region::Mid : Region::Open;
        bad += r != want;
    }
    return {bad == 0, fmt("%d cases, %d misclassified", kCases, bad)};
}

struct Script {
    std::vector<std::optional<double>> d;
    std::vector<double> yellow_x;
};

Script random_script(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Script s;
    const std::size_t n = 50 + rng() % 150;
    double d = u(rng) * 300.0, x = 300.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (u(rng) < 0.2) {
            d = u(rng) * 300.0;
        }
        if (u(rng) < 0.1) {
            x += u(rng) * 20.0 - 10.0;
        }
        s.d.push_back(u(rng) < 0.05 ? std::nullopt : std::optional<double>(d));
        s.yellow_x.push_back(x);
    }
    return s;
}

// Click events of a scripted replay; yellow on y = 0 keeps distances exact.
std::string replay(const Script& s, const Calibration& cal, double scale, double radius) {
    GestureConfig cfg{1000, radius, 10};
    GestureState state;
    std::string log;
    for (std::size_t i = 0; i < s.d.size(); ++i) {
        const auto t = static_cast<std::int64_t>(i) * 100;
        MarkerObservation y = MarkerObservation::absent(MarkerId::Yellow);
        MarkerObservation r = MarkerObservation::absent(MarkerId::Red);
        if (s.d[i]) {
            y = MarkerObservation::at(MarkerId::Yellow, {s.yellow_x[i], 0.0});
            r = MarkerObservation::at(MarkerId::Red, {s.yellow_x[i], *s.d[i] * scale});
        }
        const GestureStep step = gesture_step(state, y, r, t, cal, cfg, {1, 2});
        state = step.state;
        log += render_event_log(step.events);
    }
    return log;
}

Outcome prop_gesture_determinism() {
    std::mt19937 rng(107);
    int bad = 0;
    std::size_t clicks = 0;
    for (int i = 0; i < kCases; ++i) {
        const Script s = random_script(rng);
        const std::string a = replay(s, kCal, 1.0, 5.0);
        bad += a != replay(s, kCal, 1.0, 5.0);
        clicks += static_cast<std::size_t>(std::count(a.begin(), a.end(), '\n'));
    }
    return {bad == 0, fmt("%d scripts, %zu clicks, %d divergent replays", kCases, clicks, bad)};
}

Outcome prop_scaling_invariance() {
    std::mt19937 rng(108);
    std::uniform_real_distribution<double> k(0.05, 20.0);
    int bad = 0;
    for (int i = 0; i < kCases; ++i) {
        const Script s = random_script(rng);
        const double scale = k(rng);
        // Stationarity is a pixel radius and does not scale; keep it out of
        // reach so only the distances decide the events.
        const std::string a = replay(s, kCal, 1.0, 1e9);
        const std::string b =
            replay(s, {kCal.open_distance * scale, kCal.pinch_distance * scale}, scale, 1e9);
        bad += a != b;
    }
    return {bad == 0, fmt("%d scripts, %d sequences changed under scaling", kCases, bad)};
}

// ---------------------------------------------------------------------------

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TAPEMOUSE_CLI) + " " + args;
    return std::system(cmd.c_str());
}

Outcome replay_live_equivalence() {
    testing_support::TempDir dir("accept_equiv");
    const auto frames_dir = dir / "frames";
    write_text_file(dir / "run.cfg", "fps=10\n");
    write_text_file(dir / "cal.txt", render_calibration(kCal));
    if (run_cli("synth --kind session --out " + frames_dir.string() + " 2>/dev/null") != 0 ||
        run_cli("run --frames " + frames_dir.string() + " --config " + (dir / "run.cfg").string() +
                " --calib " + (dir / "cal.txt").string() + " --out " + (dir / "run.log").string()) !=
            0) {
        return {false, "CLI invocation failed"};
    }
    const std::string replayed = read_text_file(dir / "run.log");

    const PipelineConfig cfg = load_config(dir / "run.cfg");
    Server server(cfg, 0, "127.0.0.1");
    std::thread thread([&server] { server.run(); });
    std::string live;
    {
        testing_support::WsClient client(server.port());
        DirectoryFrameSource source(frames_dir, cfg.fps);
        const std::vector<Frame> recorded = drain(source);
        client.frame(recorded[0]);
        client.frame(recorded[1]);
        for (auto [begin, end, d] : {std::tuple{"CALIBRATE_OPEN_BEGIN", "CALIBRATE_OPEN_END", 200.0},
                                     std::tuple{"CALIBRATE_PINCH_BEGIN", "CALIBRATE_PINCH_END", 40.0}}) {
            client.text(begin);
            for (const Frame& f : scenario::pose(d, 10, cfg.fps)) {
                client.frame(f);
            }
            client.text(end);
            client.read();
        }
        client.text("STREAM_BEGIN");
        for (std::size_t i = 2; i < recorded.size(); ++i) {
            client.frame(recorded[i]);
            for (auto m = client.read(); m && !m->starts_with("STATE "); m = client.read()) {
                if (m->starts_with("EVT ")) {
                    live += m->substr(4) + "\n";
                }
            }
        }
        client.text("STREAM_END");
    }
    server.stop();
    thread.join();

    std::size_t lines = static_cast<std::size_t>(std::count(live.begin(), live.end(), '\n'));
    return {!live.empty() && live == replayed,
            fmt("run log %zu bytes, served EVT stream %zu bytes (%zu events), %s", replayed.size(),
                live.size(), lines, live == replayed ? "byte-identical" : "MISMATCH")};
}

}  // namespace

int main() {
    std::printf("tapemouse acceptance suite\n");
    criterion("jumping-pixel-ratio", 1.0, jumping_pixels);
    criterion("dwell-right-click-30fps", 1.0, [] { return dwell(100.0, EventKind::RightClick); });
    criterion("dwell-double-click-30fps", 1.0, [] { return dwell(30.0, EventKind::DoubleClick); });
    criterion("throughput", 30.0, throughput);
    criterion("end-to-end-scenario-log", 5.0, scenario_log);

    const auto props_start = Clock::now();
    criterion("prop-hsv-roundtrip", 60.0, prop_hsv_roundtrip);
    criterion("prop-color-mask-monotone", 60.0, prop_color_monotone);
    criterion("prop-background-monotone", 60.0, prop_background_monotone);
    criterion("prop-component-area", 60.0, prop_area_conservation);
    criterion("prop-disk-centroid", 60.0, prop_disk_centroid);
    criterion("prop-region-partition", 60.0, prop_region_partition);
    criterion("prop-gesture-determinism", 60.0, prop_gesture_determinism);
    criterion("prop-scaling-invariance", 60.0, prop_scaling_invariance);
    const double props_s = std::chrono::duration<double>(Clock::now() - props_start).count();
    criterion("property-suites-total-time", 60.0, [props_s] {
        return Outcome{props_s <= 60.0, fmt("%.2f s for all property suites", props_s)};
    });

    criterion("replay-live-equivalence", 60.0, replay_live_equivalence);

    std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
