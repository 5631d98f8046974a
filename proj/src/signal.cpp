#include "pulsewarp/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pulsewarp {

namespace {

// Shared by the batch and streaming paths so both emit bit-identical grids.
// Exact at the endpoints (a plain lerp would be off by an ulp there) and
// clamped so interpolation can never overshoot its bracket.
double lerp_between(const HeartRateSample& a, const HeartRateSample& b, double t) {
    if (t <= a.t) return a.bpm;
    if (t >= b.t) return b.bpm;
    const double v = a.bpm + (t - a.t) * (b.bpm - a.bpm) / (b.t - a.t);
    return std::clamp(v, std::min(a.bpm, b.bpm), std::max(a.bpm, b.bpm));
}

void require_positive_rate(double rate_hz) {
    if (!(rate_hz > 0.0)) throw std::invalid_argument("grid rate must be positive");
}

}  // namespace

const char* to_string(SignalError e) {
    switch (e) {
        case SignalError::EmptyInput: return "EmptyInput";
        case SignalError::NonMonotoneTimestamps: return "NonMonotoneTimestamps";
        case SignalError::EmptyWindow: return "EmptyWindow";
    }
    return "SignalError";
}

double UniformHrSeries::value_at(double t) const {
    if (values.empty()) return 0.0;
    if (t <= start_t) return values.front();
    if (t >= end_t()) return values.back();
    const double x = (t - start_t) * rate_hz;
    const auto i = static_cast<std::size_t>(x);
    if (i + 1 >= values.size()) return values.back();
    const double frac = x - static_cast<double>(i);
    const double lo = std::min(values[i], values[i + 1]);
    const double hi = std::max(values[i], values[i + 1]);
    return std::clamp(values[i] + frac * (values[i + 1] - values[i]), lo, hi);
}

Result<UniformHrSeries, SignalError> interpolate(std::span<const HeartRateSample> samples,
                                                 double rate_hz) {
    require_positive_rate(rate_hz);
    if (samples.empty()) return SignalError::EmptyInput;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].t > samples[i - 1].t)) return SignalError::NonMonotoneTimestamps;
    }

    UniformHrSeries series;
    series.rate_hz = rate_hz;
    series.start_t = samples.front().t;
    const double t_last = samples.back().t;

    std::size_t j = 0;  // bracket cursor; samples[j].t < t <= samples[j+1].t
    for (std::size_t i = 0;; ++i) {
        const double t = series.t_at(i);
        if (!(t <= t_last)) break;
        if (t <= samples.front().t) {
            series.values.push_back(samples.front().bpm);
            continue;
        }
        while (j + 1 < samples.size() && samples[j + 1].t < t) ++j;
        series.values.push_back(lerp_between(samples[j], samples[j + 1], t));
    }
    return series;
}

GridInterpolator::GridInterpolator(double rate_hz) {
    require_positive_rate(rate_hz);
    series_.rate_hz = rate_hz;
}

std::optional<SignalError> GridInterpolator::push(const HeartRateSample& s) {
    if (count_ > 0 && !(s.t > prev_.t)) return SignalError::NonMonotoneTimestamps;
    if (count_ == 0) {
        // Grid point 0 coincides with the first sample.
        series_.start_t = s.t;
        series_.values.push_back(s.bpm);
        next_index_ = 1;
    } else {
        while (series_.t_at(next_index_) <= s.t) {
            series_.values.push_back(lerp_between(prev_, s, series_.t_at(next_index_)));
            ++next_index_;
        }
    }
    prev_ = s;
    ++count_;
    return std::nullopt;
}

RollingWindow::RollingWindow(double window_s) : window_s_(window_s) {
    if (!(window_s > 0.0)) throw std::invalid_argument("window must be positive");
}

void RollingWindow::push(double t, double v) {
    values_.emplace_back(t, v);
    sum_ += v;
    while (!min_q_.empty() && min_q_.back().second >= v) min_q_.pop_back();
    min_q_.emplace_back(t, v);
    while (!max_q_.empty() && max_q_.back().second <= v) max_q_.pop_back();
    max_q_.emplace_back(t, v);
}

Result<WindowStats, SignalError> RollingWindow::stats_at(double now_t) {
    const double cutoff = now_t - window_s_;
    while (!values_.empty() && values_.front().first <= cutoff) {
        sum_ -= values_.front().second;
        values_.pop_front();
    }
    while (!min_q_.empty() && min_q_.front().first <= cutoff) min_q_.pop_front();
    while (!max_q_.empty() && max_q_.front().first <= cutoff) max_q_.pop_front();

    if (values_.empty()) {
        sum_ = 0.0L;  // shed any accumulated rounding residue
        return SignalError::EmptyWindow;
    }
    WindowStats stats;
    stats.window_s = window_s_;
    stats.min_bpm = min_q_.front().second;
    stats.max_bpm = max_q_.front().second;
    stats.mean_bpm = static_cast<double>(sum_ / static_cast<long double>(values_.size()));
    return stats;
}

Result<WindowStats, SignalError> window_stats(const UniformHrSeries& series, double now_t,
                                              double window_s) {
    if (!(window_s > 0.0)) throw std::invalid_argument("window must be positive");
    const auto n = series.values.size();
    if (n == 0) return SignalError::EmptyWindow;

    const double cutoff = now_t - window_s;

    // Approximate indices from the grid arithmetic, then settle the boundaries
    // against the exact predicate t_at(i) in (cutoff, now_t].
    auto clamp_idx = [n](double x) {
        if (x < 0.0) return std::size_t{0};
        if (x >= static_cast<double>(n - 1)) return n - 1;
        return static_cast<std::size_t>(x);
    };
    std::size_t hi = clamp_idx((now_t - series.start_t) * series.rate_hz);
    while (hi + 1 < n && series.t_at(hi + 1) <= now_t) ++hi;
    while (hi > 0 && series.t_at(hi) > now_t) --hi;
    if (series.t_at(hi) > now_t) return SignalError::EmptyWindow;

    std::size_t lo = clamp_idx((cutoff - series.start_t) * series.rate_hz);
    while (lo > 0 && series.t_at(lo - 1) > cutoff) --lo;
    while (lo < n && series.t_at(lo) <= cutoff) ++lo;
    if (lo > hi) return SignalError::EmptyWindow;

    RollingWindow window(window_s);
    for (std::size_t i = lo; i <= hi; ++i) window.push(series.t_at(i), series.values[i]);
    return window.stats_at(now_t);
}

}  // namespace pulsewarp
