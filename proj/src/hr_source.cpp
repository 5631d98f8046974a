#include "pulsewarp/hr_source.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>

#include "pulsewarp/ble.hpp"

namespace pulsewarp {

const char* to_string(ParseError e) {
    switch (e) {
        case ParseError::TruncatedPayload: return "TruncatedPayload";
        case ParseError::BpmOutOfRange: return "BpmOutOfRange";
    }
    return "ParseError";
}

const char* to_string(StreamError e) {
    switch (e) {
        case StreamError::DeviceNotFound: return "DeviceNotFound";
        case StreamError::ConnectionLost: return "ConnectionLost";
        case StreamError::AdapterUnavailable: return "AdapterUnavailable";
        case StreamError::NonMonotoneTimestamps: return "NonMonotoneTimestamps";
    }
    return "StreamError";
}

Result<HrMeasurement, ParseError> parse_hr_measurement(std::span<const std::uint8_t> payload) {
    if (payload.size() < 2) return ParseError::TruncatedPayload;

    const std::uint8_t flags = payload[0];
    const bool bpm_is_u16 = (flags & 0x01) != 0;
    const bool has_energy = (flags & 0x08) != 0;
    const bool has_rr = (flags & 0x10) != 0;

    std::size_t off = 1;
    std::uint32_t raw_bpm = 0;
    if (bpm_is_u16) {
        if (off + 2 > payload.size()) return ParseError::TruncatedPayload;
        raw_bpm = static_cast<std::uint32_t>(payload[off]) |
                  (static_cast<std::uint32_t>(payload[off + 1]) << 8);
        off += 2;
    } else {
        raw_bpm = payload[off];
        off += 1;
    }
    if (has_energy) {
        if (off + 2 > payload.size()) return ParseError::TruncatedPayload;
        off += 2;  // kilojoules, not carried through
    }

    HrMeasurement m;
    if (has_rr) {
        const std::size_t remaining = payload.size() - off;
        if (remaining < 2 || remaining % 2 != 0) return ParseError::TruncatedPayload;
        while (off < payload.size()) {
            const std::uint32_t units = static_cast<std::uint32_t>(payload[off]) |
                                        (static_cast<std::uint32_t>(payload[off + 1]) << 8);
            m.rr_intervals.push_back(static_cast<double>(units) / 1024.0);
            off += 2;
        }
    } else if (off != payload.size()) {
        // Trailing bytes the flags do not account for.
        return ParseError::TruncatedPayload;
    }

    m.bpm = static_cast<double>(raw_bpm);
    if (!(m.bpm > kMinValidBpm && m.bpm < kMaxValidBpm)) return ParseError::BpmOutOfRange;
    return m;
}

// ---- Replay CSV ----

namespace {

constexpr const char* kReplayHeader = "t_seconds,bpm";

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view field, double& out) {
    if (field.empty()) return false;
    // from_chars(double) in libstdc++ 11 rejects leading '+'; strtod is enough
    // here and replay files are small.
    std::string tmp(field);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || errno == ERANGE || !std::isfinite(v)) return false;
    out = v;
    return true;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::vector<HeartRateSample> read_replay_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open replay file: " + path);

    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kReplayHeader) {
        throw MalformedReplayRow("replay file missing `t_seconds,bpm` header: " + path);
    }

    std::vector<HeartRateSample> samples;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        double t = 0.0, bpm = 0.0;
        if (comma == std::string::npos ||
            !parse_double(std::string_view(line).substr(0, comma), t) ||
            !parse_double(std::string_view(line).substr(comma + 1), bpm)) {
            throw MalformedReplayRow("replay row " + std::to_string(row) + " unparseable: " + line);
        }
        if (t < 0.0) {
            throw MalformedReplayRow("replay row " + std::to_string(row) + ": negative timestamp");
        }
        if (!samples.empty() && !(t > samples.back().t)) {
            throw MalformedReplayRow("replay row " + std::to_string(row) +
                                     ": timestamps must strictly increase");
        }
        if (!(bpm > kMinValidBpm && bpm < kMaxValidBpm)) {
            throw MalformedReplayRow("replay row " + std::to_string(row) + ": bpm out of range");
        }
        samples.push_back(HeartRateSample{t, bpm, {}});
    }
    return samples;
}

void write_replay_csv(std::span<const HeartRateSample> samples, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write replay file: " + path);
    out << kReplayHeader << '\n';
    for (const auto& s : samples) {
        out << format_double(s.t) << ',' << format_double(s.bpm) << '\n';
    }
    if (!out) throw IoFailure("write failed: " + path);
}

// ---- Synthetic generator ----

SyntheticHr::SyntheticHr(const SyntheticParams& params)
    : params_(params),
      rng_(params.seed),
      bpm_(std::clamp(params.start_bpm, params.lo_bpm, params.hi_bpm)) {}

HeartRateSample SyntheticHr::next(double dt) {
    if (!started_) {
        started_ = true;
        return HeartRateSample{0.0, bpm_, {}};
    }
    t_ += dt;
    double b = bpm_ + params_.drift * std::sqrt(dt) * rng_.gaussian();
    for (int guard = 0; (b < params_.lo_bpm || b > params_.hi_bpm) && guard < 64; ++guard) {
        if (b < params_.lo_bpm) b = 2.0 * params_.lo_bpm - b;
        if (b > params_.hi_bpm) b = 2.0 * params_.hi_bpm - b;
    }
    bpm_ = std::clamp(b, params_.lo_bpm, params_.hi_bpm);
    return HeartRateSample{t_, bpm_, {}};
}

// ---- Stream machinery ----

// Unbounded queue so the producer never blocks; monotonicity is enforced at
// the push, a violation closes the stream with an error marker.
class HrChannel {
  public:
    void push(HeartRateSample s) {
        std::lock_guard lock(mu_);
        if (closed_) return;
        if (have_last_ && !(s.t > last_t_)) {
            err_ = StreamError::NonMonotoneTimestamps;
            closed_ = true;
        } else {
            last_t_ = s.t;
            have_last_ = true;
            q_.push_back(std::move(s));
        }
        cv_.notify_all();
    }

    void close(std::optional<StreamError> err = std::nullopt) {
        std::lock_guard lock(mu_);
        if (!closed_) {
            closed_ = true;
            if (err) err_ = err;
        }
        cv_.notify_all();
    }

    std::optional<HeartRateSample> poll() {
        std::lock_guard lock(mu_);
        return pop_locked();
    }

    std::optional<HeartRateSample> wait_next(std::chrono::milliseconds timeout) {
        std::unique_lock lock(mu_);
        cv_.wait_for(lock, timeout, [this] { return !q_.empty() || closed_; });
        return pop_locked();
    }

    bool done() const {
        std::lock_guard lock(mu_);
        return closed_ && q_.empty();
    }

    std::optional<StreamError> error() const {
        std::lock_guard lock(mu_);
        return err_;
    }

  private:
    std::optional<HeartRateSample> pop_locked() {
        if (q_.empty()) return std::nullopt;
        HeartRateSample s = std::move(q_.front());
        q_.pop_front();
        return s;
    }

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<HeartRateSample> q_;
    bool closed_ = false;
    std::optional<StreamError> err_;
    double last_t_ = 0.0;
    bool have_last_ = false;
};

HrStream::HrStream(std::shared_ptr<HrChannel> channel, std::jthread producer)
    : channel_(std::move(channel)), producer_(std::move(producer)) {}

HrStream::HrStream(HrStream&&) noexcept = default;
HrStream& HrStream::operator=(HrStream&&) noexcept = default;

HrStream::~HrStream() {
    if (producer_.joinable()) producer_.request_stop();
}

std::optional<HeartRateSample> HrStream::poll() { return channel_->poll(); }

std::optional<HeartRateSample> HrStream::wait_next(std::chrono::milliseconds timeout) {
    return channel_->wait_next(timeout);
}

bool HrStream::done() const { return channel_->done(); }

std::optional<StreamError> HrStream::error() const { return channel_->error(); }

namespace {

using Clock = std::chrono::steady_clock;

// Sliced sleep so a stop request does not hang behind a long pacing gap.
bool sleep_until_or_stopped(const std::stop_token& stop, Clock::time_point target) {
    while (!stop.stop_requested()) {
        const auto now = Clock::now();
        if (now >= target) return true;
        std::this_thread::sleep_for(
            std::min<Clock::duration>(target - now, std::chrono::milliseconds(20)));
    }
    return false;
}

Clock::time_point offset_by_seconds(Clock::time_point start, double seconds) {
    return start +
           std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
}

HrStream make_replay_stream(const SensorConfig& config) {
    auto samples = read_replay_csv(config.address_or_path);  // throws on bad input
    const double speed = config.replay_speed > 0.0 ? config.replay_speed : 1.0;
    auto channel = std::make_shared<HrChannel>();
    std::jthread producer([channel, samples = std::move(samples), speed,
                           realtime = config.realtime](std::stop_token stop) {
        const auto start = Clock::now();
        for (const auto& s : samples) {
            const double t = s.t / speed;
            if (realtime && !sleep_until_or_stopped(stop, offset_by_seconds(start, t))) break;
            if (stop.stop_requested()) break;
            channel->push(HeartRateSample{t, s.bpm, s.rr_intervals});
        }
        channel->close();
    });
    return HrStream(std::move(channel), std::move(producer));
}

HrStream make_synthetic_stream(const SensorConfig& config) {
    auto channel = std::make_shared<HrChannel>();
    const double rate = config.query_rate_hz > 0.0 ? config.query_rate_hz : 55.0;
    std::jthread producer([channel, params = config.synth, rate, realtime = config.realtime,
                           max_samples = config.max_samples](std::stop_token stop) {
        SyntheticHr gen(params);
        const double dt = 1.0 / rate;
        const auto start = Clock::now();
        for (std::uint64_t n = 0; max_samples == 0 || n < max_samples; ++n) {
            const auto s = gen.next(dt);
            if (realtime && !sleep_until_or_stopped(stop, offset_by_seconds(start, s.t))) break;
            if (stop.stop_requested()) break;
            channel->push(s);
        }
        channel->close();
    });
    return HrStream(std::move(channel), std::move(producer));
}

}  // namespace

HrStream open_stream(const SensorConfig& config) {
    switch (config.kind) {
        case SourceKind::Replay: return make_replay_stream(config);
        case SourceKind::Synthetic: return make_synthetic_stream(config);
        case SourceKind::Ble: {
            auto adapter = ble::make_system_adapter(config.ble_adapter_hint);
            if (!adapter) {
                auto channel = std::make_shared<HrChannel>();
                channel->close(StreamError::AdapterUnavailable);
                return HrStream(std::move(channel), std::jthread{});
            }
            return ble::open_adapter_stream(std::move(adapter), config.address_or_path);
        }
    }
    throw std::invalid_argument("unknown source kind");
}

namespace ble {

HrStream open_adapter_stream(std::shared_ptr<Adapter> adapter, const std::string& address) {
    auto channel = std::make_shared<HrChannel>();
    std::jthread producer([channel, adapter = std::move(adapter), address](std::stop_token stop) {
        const auto start = Clock::now();
        double last_t = -1.0;
        auto on_payload = [&](std::span<const std::uint8_t> payload) {
            if (stop.stop_requested()) return false;
            auto parsed = parse_hr_measurement(payload);
            if (parsed.ok()) {
                // Receipt timestamps, nudged so two notifications landing on
                // the same clock tick stay strictly monotone.
                double t = std::chrono::duration<double>(Clock::now() - start).count();
                if (t <= last_t) t = std::nextafter(last_t, 1e300);
                last_t = t;
                channel->push(
                    HeartRateSample{t, parsed.value().bpm, parsed.value().rr_intervals});
            }
            // Rejected notifications are dropped; the subscription continues.
            return !stop.stop_requested();
        };
        channel->close(adapter->subscribe(address, on_payload));
    });
    return HrStream(std::move(channel), std::move(producer));
}

}  // namespace ble

void record_stream(HrStream& stream, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write replay file: " + path);
    out << kReplayHeader << '\n';
    while (true) {
        auto s = stream.wait_next(std::chrono::milliseconds(100));
        if (s) {
            out << format_double(s->t) << ',' << format_double(s->bpm) << '\n';
        } else if (stream.done()) {
            break;
        }
    }
    out.flush();
    if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace pulsewarp
