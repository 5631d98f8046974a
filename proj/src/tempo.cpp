#include "pulsewarp/tempo.hpp"

#include <algorithm>

namespace pulsewarp {

double normalize(double hr_now, const WindowStats& stats, double flat_eps) {
    const double range = stats.max_bpm - stats.min_bpm;
    // A zero range with flat_eps = 0 would otherwise divide by zero.
    if (range < flat_eps || !(range > 0.0)) return 0.5;
    return std::clamp((hr_now - stats.min_bpm) / range, 0.0, 1.0);
}

double map_tempo(double n, const TempoParams& params) {
    const double raw = params.base * (1.0 + params.gain * (n - 0.5));
    return std::clamp(raw, params.clip_lo, params.clip_hi);
}

}  // namespace pulsewarp
