#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "pulsewarp/errors.hpp"
#include "pulsewarp/result.hpp"
#include "pulsewarp/rng.hpp"

namespace pulsewarp {

// Accepted BPM range (exclusive bounds). Readings outside are rejected, never
// clamped: a glitched sensor value must not steer the tempo.
inline constexpr double kMinValidBpm = 20.0;
inline constexpr double kMaxValidBpm = 250.0;

struct HeartRateSample {
    double t = 0.0;  // seconds since stream start; strictly increasing per stream
    double bpm = 0.0;
    std::vector<double> rr_intervals;  // inter-beat intervals in seconds, optional
};

// Bounded random walk, reflecting at the limits, so desk runs sweep the whole
// mapping range without hardware.
struct SyntheticParams {
    std::uint64_t seed = 1;
    double start_bpm = 70.0;
    double drift = 2.0;  // walk scale in BPM per sqrt(second); 0 = constant BPM
    double lo_bpm = 55.0;
    double hi_bpm = 110.0;
};

enum class SourceKind { Ble, Replay, Synthetic };

struct SensorConfig {
    SourceKind kind = SourceKind::Synthetic;
    std::string address_or_path;  // BLE address or replay CSV path
    double query_rate_hz = 55.0;
    double replay_speed = 1.0;      // >1 replays faster; timestamps are divided by it
    bool realtime = true;           // false: emit as fast as possible (offline, tests)
    std::uint64_t max_samples = 0;  // synthetic only; 0 = unbounded
    std::string ble_adapter_hint;   // platform adapter selector, usually from env
    SyntheticParams synth;
};

// ---- GATT Heart Rate Measurement characteristic payloads ----

enum class ParseError { TruncatedPayload, BpmOutOfRange };
const char* to_string(ParseError e);

struct HrMeasurement {
    double bpm = 0.0;
    std::vector<double> rr_intervals;  // seconds
};

// Bit-exact parse of one Heart Rate Measurement notification. Flags byte bit 0
// selects uint8 vs uint16-LE BPM, bit 3 marks a two-byte energy-expended field
// (skipped), bit 4 marks trailing uint16-LE RR intervals in 1/1024 s units.
// Total over arbitrary byte sequences: returns a value or an error, never throws.
Result<HrMeasurement, ParseError> parse_hr_measurement(std::span<const std::uint8_t> payload);

// ---- Replay CSV: header `t_seconds,bpm`, one sample per line, LF endings ----

// Throws IoFailure / MalformedReplayRow. Rows must be strictly increasing in t
// with bpm inside the validity range.
std::vector<HeartRateSample> read_replay_csv(const std::string& path);

// Values are written round-trip exact: read_replay_csv(write) reproduces the
// (t, bpm) sequence bit for bit.
void write_replay_csv(std::span<const HeartRateSample> samples, const std::string& path);

// ---- Synthetic generator ----

class SyntheticHr {
  public:
    explicit SyntheticHr(const SyntheticParams& params);

    // First call yields the starting point at t = 0; each later call advances
    // t by dt and takes one reflected random-walk step.
    HeartRateSample next(double dt);

  private:
    SyntheticParams params_;
    GaussianRng rng_;
    double bpm_;
    double t_ = 0.0;
    bool started_ = false;
};

// ---- Stream abstraction ----

enum class StreamError {
    DeviceNotFound,
    ConnectionLost,
    AdapterUnavailable,
    NonMonotoneTimestamps,
};
const char* to_string(StreamError e);

class HrChannel;

// Pull side of a single-producer sample channel. The producer runs in its own
// thread and never blocks on the consumer; a stream that ends with an error
// leaves the marker readable via error().
class HrStream {
  public:
    HrStream(std::shared_ptr<HrChannel> channel, std::jthread producer);
    HrStream(HrStream&&) noexcept;
    HrStream& operator=(HrStream&&) noexcept;
    ~HrStream();

    std::optional<HeartRateSample> poll();  // non-blocking
    std::optional<HeartRateSample> wait_next(std::chrono::milliseconds timeout);

    // True once the producer finished and the queue is drained.
    bool done() const;
    std::optional<StreamError> error() const;

  private:
    std::shared_ptr<HrChannel> channel_;
    std::jthread producer_;
};

// Spawns the source thread for the configured kind. Replay files are parsed up
// front (throws on malformed input); BLE and device-level failures surface as
// stream error markers so a running engine can fall back to its last value.
HrStream open_stream(const SensorConfig& config);

// Drains a stream to a replay CSV. Blocks until the stream ends.
void record_stream(HrStream& stream, const std::string& path);

}  // namespace pulsewarp
