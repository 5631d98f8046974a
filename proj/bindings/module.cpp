// pulsewarp._core: python bindings for the main operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pulsewarp/engine.hpp"
#include "pulsewarp/figure.hpp"
#include "pulsewarp/hr_source.hpp"
#include "pulsewarp/loop_sim.hpp"

namespace py = pybind11;
using namespace pulsewarp;

namespace {

py::dict parse_payload(py::bytes payload) {
    const std::string raw = payload;
    const auto* data = reinterpret_cast<const std::uint8_t*>(raw.data());
    auto r = parse_hr_measurement(std::span<const std::uint8_t>(data, raw.size()));
    if (!r.ok()) {
        throw py::value_error(std::string("parse failed: ") + to_string(r.error()));
    }
    py::dict out;
    out["bpm"] = r.value().bpm;
    out["rr_intervals"] = r.value().rr_intervals;
    return out;
}

UniformHrSeries interpolate_pairs(const std::vector<std::pair<double, double>>& samples,
                                  double rate_hz) {
    std::vector<HeartRateSample> converted;
    converted.reserve(samples.size());
    for (const auto& [t, bpm] : samples) converted.push_back({t, bpm, {}});
    auto r = interpolate(converted, rate_hz);
    if (!r.ok()) throw py::value_error(std::string("interpolate: ") + to_string(r.error()));
    return r.value();
}

WindowStats window_stats_py(const UniformHrSeries& series, double now_t, double window_s) {
    auto r = window_stats(series, now_t, window_s);
    if (!r.ok()) throw py::value_error(std::string("window_stats: ") + to_string(r.error()));
    return r.value();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heart-rate driven audio tempo warping";

    py::class_<UniformHrSeries>(m, "UniformHrSeries")
        .def_readonly("rate_hz", &UniformHrSeries::rate_hz)
        .def_readonly("start_t", &UniformHrSeries::start_t)
        .def_readonly("values", &UniformHrSeries::values)
        .def("t_at", &UniformHrSeries::t_at)
        .def("value_at", &UniformHrSeries::value_at);

    py::class_<WindowStats>(m, "WindowStats")
        .def_readonly("window_s", &WindowStats::window_s)
        .def_readonly("min_bpm", &WindowStats::min_bpm)
        .def_readonly("max_bpm", &WindowStats::max_bpm)
        .def_readonly("mean_bpm", &WindowStats::mean_bpm);

    py::class_<TempoParams>(m, "TempoParams")
        .def(py::init<>())
        .def_readwrite("base", &TempoParams::base)
        .def_readwrite("clip_lo", &TempoParams::clip_lo)
        .def_readwrite("clip_hi", &TempoParams::clip_hi)
        .def_readwrite("gain", &TempoParams::gain)
        .def_readwrite("window_s", &TempoParams::window_s)
        .def_readwrite("flat_eps", &TempoParams::flat_eps);

    py::class_<AudioClip>(m, "AudioClip")
        .def(py::init<>())
        .def_readwrite("sample_rate_hz", &AudioClip::sample_rate_hz)
        .def_readwrite("channels", &AudioClip::channels)
        .def_readwrite("samples", &AudioClip::samples)
        .def_property_readonly("length_frames", &AudioClip::length_frames)
        .def_property_readonly("duration_s", &AudioClip::duration_s);

    py::class_<HeartModelParams>(m, "HeartModelParams")
        .def(py::init<>())
        .def_readwrite("hr0", &HeartModelParams::hr0)
        .def_readwrite("beta", &HeartModelParams::beta)
        .def_readwrite("tau", &HeartModelParams::tau)
        .def_readwrite("sigma", &HeartModelParams::sigma)
        .def_readwrite("seed", &HeartModelParams::seed);

    m.def("parse_hr_measurement", &parse_payload, py::arg("payload"),
          "Parse one GATT Heart Rate Measurement notification payload.");

    m.def("interpolate", &interpolate_pairs, py::arg("samples"), py::arg("rate_hz") = 55.0,
          "Linearly interpolate (t, bpm) pairs onto a uniform grid.");

    m.def("window_stats", &window_stats_py, py::arg("series"), py::arg("now_t"),
          py::arg("window_s") = 5.0);

    m.def("normalize", &normalize, py::arg("hr_now"), py::arg("stats"),
          py::arg("flat_eps") = 0.5);

    m.def("map_tempo", &map_tempo, py::arg("n"), py::arg("params") = TempoParams{});

    m.def(
        "render_offline",
        [](const AudioClip& source, const std::vector<double>& tempos, int chunk_frames) {
            return render_offline(source, tempos, chunk_frames);
        },
        py::arg("source"), py::arg("tempo_per_chunk"), py::arg("chunk_frames") = 1024,
        "Deterministic offline warp of a clip under a per-chunk tempo trace.");

    m.def("decode_wav", &decode_wav, py::arg("path"));
    m.def(
        "encode_wav",
        [](const AudioClip& clip, const std::string& path, const std::string& format) {
            if (format == "pcm16") {
                encode_wav(clip, path, WavFormat::Pcm16);
            } else if (format == "float32") {
                encode_wav(clip, path, WavFormat::Float32);
            } else {
                throw py::value_error("format must be pcm16 or float32");
            }
        },
        py::arg("clip"), py::arg("path"), py::arg("format") = "pcm16");

    m.def("compute_rms",
          [](const std::vector<float>& samples) {
              AudioChunk chunk(1, static_cast<int>(samples.size()));
              chunk.data = samples;
              return compute_rms(chunk);
          },
          py::arg("samples"));

    m.def(
        "simulate_loop",
        [](const HeartModelParams& heart, double duration_s, const TempoParams& tempo,
           double dt) {
            std::vector<std::tuple<double, double, double>> out;
            for (const auto& p : simulate_loop(heart, tempo, duration_s, dt)) {
                out.emplace_back(p.t, p.hr, p.multiplier);
            }
            return out;
        },
        py::arg("heart"), py::arg("duration_s"), py::arg("tempo") = TempoParams{},
        py::arg("dt") = 1.0 / 55.0,
        "Closed-loop simulation; returns (t, hr, multiplier) tuples.");

    m.def("step_heart",
          [](double hr, double tempo, double dt, const HeartModelParams& params,
             std::uint64_t seed) {
              GaussianRng rng(seed);
              return step_heart(hr, tempo, dt, params, rng);
          },
          py::arg("hr"), py::arg("tempo"), py::arg("dt"), py::arg("params"),
          py::arg("seed") = 1);

    m.def("write_trace_figure",
          [](const std::vector<std::tuple<double, double, double, double>>& rows,
             const std::string& path) {
              std::vector<TraceRecord> trace;
              trace.reserve(rows.size());
              for (const auto& [t, rms, hr, mult] : rows) trace.push_back({t, rms, hr, mult});
              write_trace_figure(trace, path);
          },
          py::arg("trace_rows"), py::arg("path"),
          "Write the three-panel SVG for (t, rms, hr_bpm, multiplier) rows.");

#ifdef VERSION_INFO
#define PW_STR(x) #x
#define PW_XSTR(x) PW_STR(x)
    m.attr("__version__") = PW_XSTR(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
