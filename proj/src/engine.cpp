#include "pulsewarp/engine.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pulsewarp {

double compute_rms(const AudioChunk& chunk) {
    if (chunk.data.empty()) return 0.0;
    double acc = 0.0;
    for (const float v : chunk.data) acc += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(acc / static_cast<double>(chunk.data.size()));
}

HrIngestor::HrIngestor(double grid_rate_hz, double window_s, SnapshotExchange& out)
    : grid_(grid_rate_hz), window_(window_s), out_(&out) {}

std::optional<SignalError> HrIngestor::ingest(const HeartRateSample& s) {
    const std::size_t before = grid_.series().values.size();
    if (auto err = grid_.push(s)) return err;
    ++ingested_;

    const auto& series = grid_.series();
    if (series.values.size() == before) return std::nullopt;  // between grid ticks

    for (std::size_t i = before; i < series.values.size(); ++i) {
        window_.push(series.t_at(i), series.values[i]);
    }
    auto stats = window_.stats_at(series.end_t());
    // The window always contains at least the grid point just pushed.
    ControlSnapshot snap;
    snap.hr_bpm = series.values.back();
    snap.stats = stats.value();
    snap.valid = true;
    snap.seq = ++published_;
    out_->publish(snap);
    return std::nullopt;
}

RunSummary render_stream(const AudioClip& clip, const TempoParams& tempo, int chunk_frames,
                         SnapshotExchange& snapshots, AudioSink& sink,
                         std::vector<TraceRecord>* trace, const RenderOptions& options) {
    if (!tempo.valid()) throw std::invalid_argument("invalid tempo parameters");
    if (chunk_frames <= 0) throw std::invalid_argument("chunk_frames must be positive");

    WarpState state;
    state.chunk_frames = chunk_frames;
    const double chunk_dt = static_cast<double>(chunk_frames) / clip.sample_rate_hz;

    // Neutral until the sensor path delivers; afterwards the multiplier only
    // moves when a fresh snapshot does, so a dropout holds the last value.
    double multiplier = tempo.base;
    double hr_for_trace = 0.0;

    std::uint64_t chunks = 0;
    const auto wall_start = std::chrono::steady_clock::now();
    const auto stop_requested = [&options] {
        return options.stop && options.stop->load(std::memory_order_relaxed);
    };
    while (!state.finished) {
        if (stop_requested()) break;
        const double t_chunk = static_cast<double>(chunks) * chunk_dt;
        if (options.before_chunk) options.before_chunk(t_chunk);
        if (stop_requested()) break;  // the hook may request the stop itself

        const ControlSnapshot snap = snapshots.read();
        if (snap.valid) {
            multiplier = map_tempo(normalize(snap.hr_bpm, snap.stats, tempo.flat_eps), tempo);
            hr_for_trace = snap.hr_bpm;
        }

        auto chunk = warp_chunk(clip, state, multiplier);
        sink.write(chunk.value());
        if (trace) {
            trace->push_back(TraceRecord{t_chunk, compute_rms(chunk.value()), hr_for_trace,
                                         multiplier});
        }
        ++chunks;

        if (options.pace_rate_hz > 0.0) {
            const double due_s = static_cast<double>(chunks) * chunk_frames / options.pace_rate_hz;
            std::this_thread::sleep_until(
                wall_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(due_s)));
        }
    }

    RunSummary summary;
    summary.chunks_emitted = chunks;
    summary.duration_s = static_cast<double>(chunks) * chunk_dt;
    return summary;
}

namespace {

// Offline sample feed: replay rows or a synthetic walk, delivered to the
// ingestor when the frame-count clock reaches their timestamps.
class OfflineFeed {
  public:
    OfflineFeed(const SensorConfig& config, HrIngestor& ingestor) : ingestor_(&ingestor) {
        switch (config.kind) {
            case SourceKind::Replay:
                replay_ = read_replay_csv(config.address_or_path);
                break;
            case SourceKind::Synthetic:
                synth_.emplace(config.synth);
                synth_dt_ = 1.0 / (config.query_rate_hz > 0.0 ? config.query_rate_hz : 55.0);
                max_samples_ = config.max_samples;
                break;
            case SourceKind::Ble:
                throw std::invalid_argument("BLE sources need a realtime engine run");
        }
    }

    void feed_until(double t) {
        if (synth_) {
            while (max_samples_ == 0 || fed_ < max_samples_) {
                if (!pending_) pending_ = synth_->next(synth_dt_);
                if (pending_->t > t) break;
                ingestor_->ingest(*pending_);
                pending_.reset();
                ++fed_;
            }
        } else {
            while (next_ < replay_.size() && replay_[next_].t <= t) {
                ingestor_->ingest(replay_[next_]);
                ++next_;
            }
        }
    }

  private:
    HrIngestor* ingestor_;
    std::vector<HeartRateSample> replay_;
    std::size_t next_ = 0;
    std::optional<SyntheticHr> synth_;
    double synth_dt_ = 1.0 / 55.0;
    std::optional<HeartRateSample> pending_;
    std::uint64_t fed_ = 0;
    std::uint64_t max_samples_ = 0;
};

}  // namespace

RunSummary run(const EngineConfig& config) {
    if (!config.tempo.valid()) throw std::invalid_argument("invalid tempo parameters");
    const AudioClip clip = decode_wav(config.input_path);
    if (config.sink_rate_hz != 0 && config.sink_rate_hz != clip.sample_rate_hz) {
        throw SampleRateMismatch("clip is " + std::to_string(clip.sample_rate_hz) +
                                 " Hz but the sink was asked for " +
                                 std::to_string(config.sink_rate_hz) +
                                 " Hz; resampling is not implicit");
    }

    auto sink = open_sink(config.sink_kind, clip.sample_rate_hz, clip.channels,
                          config.output_path);
    SnapshotExchange snapshots;
    HrIngestor ingestor(config.grid_rate_hz, config.tempo.window_s, snapshots);

    std::vector<TraceRecord> trace;
    std::vector<TraceRecord>* trace_ptr = config.trace_path.empty() ? nullptr : &trace;

    RunSummary summary;
    if (!config.realtime) {
        OfflineFeed feed(config.source, ingestor);
        RenderOptions options;
        options.stop = config.stop;
        options.before_chunk = [&feed](double t) { feed.feed_until(t); };
        summary = render_stream(clip, config.tempo, config.chunk_frames, snapshots, *sink,
                                trace_ptr, options);
    } else {
        auto stream = open_stream(config.source);
        std::jthread sensor([&stream, &ingestor](std::stop_token stop) {
            while (!stop.stop_requested()) {
                auto s = stream.wait_next(std::chrono::milliseconds(50));
                if (s) {
                    ingestor.ingest(*s);
                } else if (stream.done()) {
                    break;  // dropout or end: the renderer holds its last value
                }
            }
        });
        RenderOptions options;
        options.stop = config.stop;
        options.pace_rate_hz = static_cast<double>(clip.sample_rate_hz);
        summary = render_stream(clip, config.tempo, config.chunk_frames, snapshots, *sink,
                                trace_ptr, options);
    }

    sink->close();
    if (trace_ptr) {
        write_trace_csv(trace, config.trace_path);
        summary.trace_path = config.trace_path;
    }
    return summary;
}

}  // namespace pulsewarp
