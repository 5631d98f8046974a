#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pulsewarp/audio_io.hpp"
#include "pulsewarp/hr_source.hpp"
#include "pulsewarp/signal.hpp"
#include "pulsewarp/tempo.hpp"
#include "pulsewarp/trace.hpp"
#include "pulsewarp/warp.hpp"

namespace pulsewarp {

struct EngineConfig {
    TempoParams tempo;
    int chunk_frames = 1024;
    double grid_rate_hz = 55.0;  // uniform heart-rate grid, independent of source rate
    SensorConfig source;
    SinkKind sink_kind = SinkKind::File;
    std::string input_path;   // WAV source material
    std::string output_path;  // file-sink target
    std::string trace_path;   // empty = no trace
    int sink_rate_hz = 0;     // 0 = clip rate; any other mismatch is an error, not a resample
    bool realtime = false;    // false: offline-clocked, fully deterministic
    const std::atomic<bool>* stop = nullptr;  // graceful stop request (signal handlers)
};

struct RunSummary {
    std::uint64_t chunks_emitted = 0;
    double duration_s = 0.0;  // emitted audio, not wall clock
    std::string trace_path;
};

// sqrt(mean of squared samples) across frames and channels.
double compute_rms(const AudioChunk& chunk);

// Latest control values published by the sensor side, read by the audio side
// at chunk boundaries.
struct ControlSnapshot {
    double hr_bpm = 0.0;
    WindowStats stats;
    bool valid = false;     // false until the first grid value exists
    std::uint64_t seq = 0;  // increments per publish
};

// Single-producer/single-consumer latest-value exchange (triple buffer). Both
// publish and read are wait-free and never observe a torn snapshot: each slot
// is exclusively owned while written or read.
class SnapshotExchange {
  public:
    void publish(const ControlSnapshot& s) {
        buf_[write_] = s;
        write_ = latest_.exchange(write_ | kFresh, std::memory_order_acq_rel) & kIndex;
    }

    // Latest published snapshot; an all-defaults snapshot before the first
    // publish.
    ControlSnapshot read() {
        if (latest_.load(std::memory_order_acquire) & kFresh) {
            read_ = latest_.exchange(read_, std::memory_order_acq_rel) & kIndex;
        }
        return buf_[read_];
    }

  private:
    static constexpr int kFresh = 4;
    static constexpr int kIndex = 3;
    ControlSnapshot buf_[3];
    std::atomic<int> latest_{1};
    int write_ = 0;  // producer-owned slot
    int read_ = 2;   // consumer-owned slot
};

// Sensor-side state: incremental grid interpolation plus the rolling window,
// publishing a snapshot whenever new grid values appear.
class HrIngestor {
  public:
    HrIngestor(double grid_rate_hz, double window_s, SnapshotExchange& out);

    // Non-monotone samples are reported and dropped; the published state is
    // unaffected.
    std::optional<SignalError> ingest(const HeartRateSample& s);

    std::uint64_t samples_ingested() const { return ingested_; }
    const UniformHrSeries& series() const { return grid_.series(); }

  private:
    GridInterpolator grid_;
    RollingWindow window_;
    SnapshotExchange* out_;
    std::uint64_t ingested_ = 0;
    std::uint64_t published_ = 0;
};

struct RenderOptions {
    const std::atomic<bool>* stop = nullptr;  // external stop request
    double pace_rate_hz = 0.0;                // 0 = render as fast as possible
    // Offline hook, called with each chunk's start time before the snapshot is
    // read; the offline clock feeds sensor samples through this.
    std::function<void(double)> before_chunk;
};

// Renders every chunk of `clip` through the warp, reading the freshest
// snapshot at each chunk boundary. The audio path never waits on the sensor
// path: a stalled stream leaves the multiplier at its last value while chunks
// keep flowing. Tempo is sampled exactly once per chunk.
RunSummary render_stream(const AudioClip& clip, const TempoParams& tempo, int chunk_frames,
                         SnapshotExchange& snapshots, AudioSink& sink,
                         std::vector<TraceRecord>* trace, const RenderOptions& options = {});

// Full pipeline: decode, sensor ingestion (threaded when realtime, clocked by
// frame counts when offline), warp, sink, trace.
RunSummary run(const EngineConfig& config);

}  // namespace pulsewarp
