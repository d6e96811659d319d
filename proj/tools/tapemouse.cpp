// Command-line front end: replay, calibration, benchmark, live service.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "tapemouse/config.hpp"
#include "tapemouse/event_log.hpp"
#include "tapemouse/pipeline.hpp"
#include "tapemouse/scenario.hpp"
#include "tapemouse/server.hpp"

using namespace tapemouse;

namespace {

PipelineConfig config_from(const std::string& path) {
    return path.empty() ? PipelineConfig{} : load_config(path);
}

int cmd_run(const std::string& frames, const std::string& config, const std::string& calib,
            const std::string& out) {
    const PipelineConfig cfg = config_from(config);
    const Calibration cal = load_calibration(calib);
    DirectoryFrameSource source(frames, cfg.fps);
    const auto events = run_pipeline(source, cfg, cal);
    const std::string log = render_event_log(events);
    if (out.empty() || out == "-") {
        std::cout << log;
    } else {
        write_text_file(out, log);
    }
    return 0;
}

int cmd_calibrate(const std::string& open, const std::string& pinch, const std::string& config,
                  const std::string& out) {
    const PipelineConfig cfg = config_from(config);
    DirectoryFrameSource open_src(open, cfg.fps);
    DirectoryFrameSource pinch_src(pinch, cfg.fps);
    const Calibration cal = run_calibration(open_src, pinch_src, cfg);
    const std::string text = render_calibration(cal);
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text_file(out, text);
    }
    return 0;
}

int cmd_bench(const std::string& frames, const std::string& config, const std::string& calib) {
    const PipelineConfig cfg = config_from(config);
    const Calibration cal = calib.empty() ? nominal_calibration(cfg) : load_calibration(calib);
    DirectoryFrameSource source(frames, cfg.fps);
    const std::vector<Frame> all = drain(source);
    const BenchReport r = bench(all, cfg, cal);
    std::printf("frames %zu\n", r.frames);
    std::printf("elapsed_ms %.3f\n", r.elapsed_ms);
    std::printf("fps %.2f\n", r.fps);
    std::printf("stage background_ms %.4f\n", r.stage_mean_ms.background_ms);
    std::printf("stage skin_ms %.4f\n", r.stage_mean_ms.skin_ms);
    std::printf("stage color_ms %.4f\n", r.stage_mean_ms.color_ms);
    std::printf("stage denoise_ms %.4f\n", r.stage_mean_ms.denoise_ms);
    std::printf("stage tracking_ms %.4f\n", r.stage_mean_ms.tracking_ms);
    std::printf("stage gesture_ms %.4f\n", r.stage_mean_ms.gesture_ms);
    return 0;
}

int cmd_serve(int port, const std::string& config, const std::string& address) {
    const PipelineConfig cfg = config_from(config);
    Server server(cfg, static_cast<std::uint16_t>(port), address);
    std::cerr << "listening on " << address << ":" << server.port() << "\n";
    server.run();
    return 0;
}

int cmd_synth(const std::string& kind, const std::string& out, double distance, std::size_t count,
              std::size_t background) {
    // PPM carries no timestamps; readers restamp frames from their config fps.
    constexpr int fps = 10;
    std::vector<Frame> frames;
    if (kind == "session") {
        frames = scenario::scripted_session(fps);
    } else if (kind == "pose") {
        frames = scenario::empty_workspace(background, fps);
        auto hand = scenario::pose(distance, count, fps);
        frames.insert(frames.end(), hand.begin(), hand.end());
    } else if (kind == "empty") {
        frames = scenario::empty_workspace(count, fps);
    } else {
        throw CLI::ValidationError("--kind", "expected session, pose or empty");
    }
    scenario::write_sequence(out, frames);
    std::cerr << "wrote " << frames.size() << " frames to " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tapemouse: two-tape virtual mouse engine"};
    app.require_subcommand(1);

    std::string frames, config, calib, out, open, pinch, address = "0.0.0.0", kind = "session";
    int port = 8765;
    double distance = 200.0;
    std::size_t count = 10, background = 2;

    auto* run = app.add_subcommand("run", "Replay a frame directory into an event log");
    run->add_option("--frames", frames, "Directory of frame_*.ppm files")->required();
    run->add_option("--config", config, "Config file (key=value)");
    run->add_option("--calib", calib, "Calibration file")->required();
    run->add_option("--out", out, "Event log path (stdout when omitted)");

    auto* cal = app.add_subcommand("calibrate", "Measure D and D' from open and pinch recordings");
    cal->add_option("--open", open, "Open-hand frames; the first background.frames are empty")
        ->required();
    cal->add_option("--pinch", pinch, "Pinched-hand frames")->required();
    cal->add_option("--config", config, "Config file");
    cal->add_option("--out", out, "Calibration output path (stdout when omitted)");

    auto* bch = app.add_subcommand("bench", "Measure pipeline throughput");
    bch->add_option("--frames", frames, "Directory of frame_*.ppm files")->required();
    bch->add_option("--config", config, "Config file");
    bch->add_option("--calib", calib, "Calibration file (nominal values when omitted)");

    auto* srv = app.add_subcommand("serve", "Run the WebSocket frame-stream service");
    srv->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
    srv->add_option("--config", config, "Config file");
    srv->add_option("--address", address, "Bind address");

    auto* cfg_cmd = app.add_subcommand("config", "Configuration utilities");
    cfg_cmd->require_subcommand(1);
    auto* dump = cfg_cmd->add_subcommand("dump", "Print the effective configuration");
    dump->add_option("--config", config, "Config file to load over the defaults");

    auto* syn = app.add_subcommand("synth", "Write synthetic frame sequences");
    syn->add_option("--kind", kind, "session | pose | empty")
        ->check(CLI::IsMember({"session", "pose", "empty"}));
    syn->add_option("--out", out, "Output directory")->required();
    syn->add_option("--distance", distance, "Tape distance for --kind pose");
    syn->add_option("--count", count, "Hand frames for pose, frames for empty");
    syn->add_option("--background", background, "Leading empty frames for pose");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return cmd_run(frames, config, calib, out);
        }
        if (*cal) {
            return cmd_calibrate(open, pinch, config, out);
        }
        if (*bch) {
            return cmd_bench(frames, config, calib);
        }
        if (*srv) {
            return cmd_serve(port, config, address);
        }
        if (*dump) {
            std::cout << render_config(config_from(config));
            return 0;
        }
        if (*syn) {
            return cmd_synth(kind, out, distance, count, background);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
