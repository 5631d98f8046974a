// pulsewarp command line: sensor scanning, live play, offline render, loop
// simulation, and trace plotting.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pulsewarp/ble.hpp"
#include "pulsewarp/engine.hpp"
#include "pulsewarp/figure.hpp"
#include "pulsewarp/loop_sim.hpp"

namespace pw = pulsewarp;

namespace {

std::atomic<bool> g_stop{false};

void on_interrupt(int) { g_stop.store(true); }

struct TempoFlags {
    double base = 1.25;
    std::string clip = "1.0:1.5";
    double gain = 0.4;
    double window_s = 5.0;
    double flat_eps = 0.5;

    void attach(CLI::App& cmd) {
        cmd.add_option("--base", base, "Neutral tempo multiplier")->capture_default_str();
        cmd.add_option("--clip", clip, "Multiplier bounds, lo:hi")->capture_default_str();
        cmd.add_option("--gain", gain, "Sensitivity around the neutral point")
            ->capture_default_str();
        cmd.add_option("--window", window_s, "Normalization window, seconds")
            ->capture_default_str();
        cmd.add_option("--flat-eps", flat_eps, "Window range treated as flat, BPM")
            ->capture_default_str();
    }

    pw::TempoParams params() const {
        pw::TempoParams p;
        p.base = base;
        p.gain = gain;
        p.window_s = window_s;
        p.flat_eps = flat_eps;
        const auto colon = clip.find(':');
        if (colon == std::string::npos) {
            throw CLI::ValidationError("--clip", "expected lo:hi");
        }
        try {
            p.clip_lo = std::stod(clip.substr(0, colon));
            p.clip_hi = std::stod(clip.substr(colon + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--clip", "expected numeric lo:hi");
        }
        if (!p.valid()) {
            throw CLI::ValidationError("--clip/--base/--gain",
                                       "need clip_lo <= base <= clip_hi, clip_lo < clip_hi, "
                                       "gain >= 0");
        }
        return p;
    }
};

// `ble:<addr>`, `replay:<path>`, `sim`, or `sim:<seed>`.
pw::SensorConfig parse_source(const std::string& spec) {
    pw::SensorConfig config;
    if (const char* hint = std::getenv("PULSEWARP_BLE_ADAPTER")) config.ble_adapter_hint = hint;
    if (spec.rfind("ble:", 0) == 0) {
        config.kind = pw::SourceKind::Ble;
        config.address_or_path = spec.substr(4);
        if (config.address_or_path.empty()) {
            throw CLI::ValidationError("--source", "ble: needs a device address");
        }
    } else if (spec.rfind("replay:", 0) == 0) {
        config.kind = pw::SourceKind::Replay;
        config.address_or_path = spec.substr(7);
        if (config.address_or_path.empty()) {
            throw CLI::ValidationError("--source", "replay: needs a file path");
        }
    } else if (spec == "sim" || spec.rfind("sim:", 0) == 0) {
        config.kind = pw::SourceKind::Synthetic;
        if (spec.size() > 4) {
            try {
                config.synth.seed = std::stoull(spec.substr(4));
            } catch (const std::exception&) {
                throw CLI::ValidationError("--source", "sim seed must be an integer");
            }
        }
    } else {
        throw CLI::ValidationError("--source", "expected ble:<addr>, replay:<path>, or sim[:seed]");
    }
    return config;
}

int cmd_scan(double timeout_s, const std::string& adapter_hint) {
    auto adapter = pw::ble::make_system_adapter(adapter_hint);
    if (!adapter) {
        throw pw::AdapterUnavailable("no BLE adapter available on this host");
    }
    const auto devices = adapter->scan(
        std::chrono::milliseconds(static_cast<long>(timeout_s * 1000.0)));
    for (const auto& d : devices) {
        std::printf("%s\t%s\n", d.name.c_str(), d.address.c_str());
    }
    return 0;
}

void print_summary(const pw::RunSummary& summary) {
    std::printf("chunks emitted: %llu\n",
                static_cast<unsigned long long>(summary.chunks_emitted));
    std::printf("audio duration: %.3f s\n", summary.duration_s);
    if (!summary.trace_path.empty()) std::printf("trace: %s\n", summary.trace_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heart-rate driven tempo warping"};
    app.require_subcommand(1);

    // scan
    auto* scan = app.add_subcommand("scan", "List BLE devices advertising the Heart Rate Service");
    double scan_timeout = 10.0;
    std::string scan_adapter;
    scan->add_option("--timeout", scan_timeout, "Scan duration, seconds")->capture_default_str();
    scan->add_option("--adapter", scan_adapter, "Adapter hint (default: $PULSEWARP_BLE_ADAPTER)");

    // play
    auto* play = app.add_subcommand("play", "Live run: sensor stream drives playback tempo");
    std::string play_input, play_source = "sim", play_out, play_trace, play_sink = "device";
    int play_chunk = 1024;
    TempoFlags play_tempo;
    play->add_option("--input", play_input, "Source WAV file")->required();
    play->add_option("--source", play_source, "ble:<addr> | replay:<path> | sim[:seed]")
        ->capture_default_str();
    play->add_option("--sink", play_sink, "device | file")->capture_default_str();
    play->add_option("--out", play_out, "Output WAV (file sink)");
    play->add_option("--trace", play_trace, "Trace CSV to write");
    play->add_option("--chunk", play_chunk, "Output chunk size, frames")->capture_default_str();
    play_tempo.attach(*play);

    // render
    auto* render = app.add_subcommand("render", "Offline deterministic render to WAV + trace");
    std::string render_input, render_hr, render_source, render_out, render_trace;
    int render_chunk = 1024;
    TempoFlags render_tempo;
    render->add_option("--input", render_input, "Source WAV file")->required();
    render->add_option("--hr", render_hr, "Heart-rate replay CSV (shorthand for --source replay:)");
    render->add_option("--source", render_source, "replay:<path> | sim[:seed]");
    render->add_option("--out", render_out, "Output WAV file")->required();
    render->add_option("--trace", render_trace, "Trace CSV to write");
    render->add_option("--chunk", render_chunk, "Output chunk size, frames")
        ->capture_default_str();
    render_tempo.attach(*render);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Closed-loop heart/tempo simulation");
    double sim_duration = 120.0, sim_dt = 1.0 / 55.0;
    pw::HeartModelParams heart;
    std::string sim_out;
    TempoFlags sim_tempo;
    simulate->add_option("--duration", sim_duration, "Simulated seconds")->capture_default_str();
    simulate->add_option("--dt", sim_dt, "Step size, seconds")->capture_default_str();
    simulate->add_option("--hr0", heart.hr0, "Baseline BPM")->capture_default_str();
    simulate->add_option("--beta", heart.beta, "BPM per unit tempo deviation")
        ->capture_default_str();
    simulate->add_option("--tau", heart.tau, "Response time constant, seconds")
        ->capture_default_str();
    simulate->add_option("--sigma", heart.sigma, "Noise scale, BPM/sqrt(s)")
        ->capture_default_str();
    simulate->add_option("--seed", heart.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out", sim_out, "Trajectory CSV")->required();
    sim_tempo.attach(*simulate);

    // plot
    auto* plot = app.add_subcommand("plot", "Render a trace CSV as a three-panel SVG figure");
    std::string plot_trace, plot_out;
    plot->add_option("--trace", plot_trace, "Trace CSV produced by play/render")->required();
    plot->add_option("--out", plot_out, "SVG output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (scan->parsed()) {
            if (scan_adapter.empty()) {
                if (const char* hint = std::getenv("PULSEWARP_BLE_ADAPTER")) scan_adapter = hint;
            }
            return cmd_scan(scan_timeout, scan_adapter);
        }

        if (play->parsed()) {
            std::signal(SIGINT, on_interrupt);
            pw::EngineConfig config;
            config.tempo = play_tempo.params();
            config.chunk_frames = play_chunk;
            config.source = parse_source(play_source);
            config.input_path = play_input;
            config.trace_path = play_trace;
            config.realtime = true;
            config.stop = &g_stop;
            if (play_sink == "file") {
                if (play_out.empty()) {
                    throw CLI::ValidationError("--out", "file sink needs an output path");
                }
                config.sink_kind = pw::SinkKind::File;
                config.output_path = play_out;
            } else if (play_sink == "device") {
                config.sink_kind = pw::SinkKind::Device;
            } else {
                throw CLI::ValidationError("--sink", "expected device or file");
            }
            print_summary(pw::run(config));
            return 0;
        }

        if (render->parsed()) {
            pw::EngineConfig config;
            config.tempo = render_tempo.params();
            config.chunk_frames = render_chunk;
            config.input_path = render_input;
            config.output_path = render_out;
            config.trace_path = render_trace;
            config.sink_kind = pw::SinkKind::File;
            config.realtime = false;
            if (!render_hr.empty()) {
                config.source.kind = pw::SourceKind::Replay;
                config.source.address_or_path = render_hr;
            } else if (!render_source.empty()) {
                config.source = parse_source(render_source);
                if (config.source.kind == pw::SourceKind::Ble) {
                    throw CLI::ValidationError("--source", "render is offline; use --hr or sim");
                }
            } else {
                throw CLI::ValidationError("--hr/--source", "render needs a heart-rate source");
            }
            config.source.realtime = false;
            print_summary(pw::run(config));
            return 0;
        }

        if (simulate->parsed()) {
            const auto trajectory =
                pw::simulate_loop(heart, sim_tempo.params(), sim_duration, sim_dt);
            pw::write_trajectory_csv(trajectory, sim_out);
            std::printf("steps: %zu\ntrajectory: %s\n", trajectory.size(), sim_out.c_str());
            return 0;
        }

        if (plot->parsed()) {
            const auto trace = pw::read_trace_csv(plot_trace);
            pw::write_trace_figure(trace, plot_out);
            std::printf("figure: %s (%zu rows)\n", plot_out.c_str(), trace.size());
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
