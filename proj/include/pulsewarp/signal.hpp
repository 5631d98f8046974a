#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "pulsewarp/hr_source.hpp"
#include "pulsewarp/result.hpp"

namespace pulsewarp {

enum class SignalError { EmptyInput, NonMonotoneTimestamps, EmptyWindow };
const char* to_string(SignalError e);

// Fixed-rate heart-rate grid. Index i corresponds to time start_t + i/rate_hz;
// there are no gaps.
struct UniformHrSeries {
    double rate_hz = 55.0;
    double start_t = 0.0;
    std::vector<double> values;  // BPM

    double t_at(std::size_t i) const { return start_t + static_cast<double>(i) / rate_hz; }
    double end_t() const { return values.empty() ? start_t : t_at(values.size() - 1); }

    // Value at an arbitrary time: linear between grid points, held constant
    // outside the covered span.
    double value_at(double t) const;
};

// Batch linear interpolation of a strictly monotone sample list onto the grid.
// Values never overshoot the bracketing samples; outside the sampled interval
// the nearest sample is held.
Result<UniformHrSeries, SignalError> interpolate(std::span<const HeartRateSample> samples,
                                                 double rate_hz = 55.0);

// Streaming form of interpolate. Feeding the same samples incrementally yields
// a grid element-wise identical to the batch call (bit-exact, same emission
// rule and same arithmetic).
class GridInterpolator {
  public:
    explicit GridInterpolator(double rate_hz = 55.0);

    // Emits all grid points up to s.t. Rejects non-increasing timestamps and
    // leaves the state untouched in that case.
    std::optional<SignalError> push(const HeartRateSample& s);

    const UniformHrSeries& series() const { return series_; }
    bool has_samples() const { return count_ > 0; }
    const HeartRateSample& last_sample() const { return prev_; }

  private:
    UniformHrSeries series_;
    HeartRateSample prev_;
    std::uint64_t count_ = 0;
    std::size_t next_index_ = 0;
};

struct WindowStats {
    double window_s = 5.0;
    double min_bpm = 0.0;
    double max_bpm = 0.0;
    double mean_bpm = 0.0;
};

// Trailing-window min/max/mean with amortized O(1) updates: monotone deques
// for the extrema, a compensating running sum for the mean. Entries are
// evicted by time, window (now_t - window_s, now_t].
class RollingWindow {
  public:
    explicit RollingWindow(double window_s);

    void push(double t, double v);  // t must be non-decreasing across pushes

    // Evicts everything at or before now_t - window_s, then reports stats over
    // what remains. EmptyWindow when nothing is left.
    Result<WindowStats, SignalError> stats_at(double now_t);

    bool empty() const { return values_.empty(); }

  private:
    double window_s_;
    std::deque<std::pair<double, double>> values_;  // (t, v) insertion order
    std::deque<std::pair<double, double>> min_q_;   // value-increasing
    std::deque<std::pair<double, double>> max_q_;   // value-decreasing
    long double sum_ = 0.0L;
};

// Stats over the grid points of `series` with t in (now_t - window_s, now_t].
// Fewer than two points is fine; no points at all is EmptyWindow.
Result<WindowStats, SignalError> window_stats(const UniformHrSeries& series, double now_t,
                                              double window_s);

}  // namespace pulsewarp
