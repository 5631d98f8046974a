#pragma once

#include "pulsewarp/signal.hpp"

namespace pulsewarp {

struct TempoParams {
    double base = 1.25;    // multiplier when the heart rate sits mid-window
    double clip_lo = 1.0;
    double clip_hi = 1.5;
    double gain = 0.4;     // sensitivity around the neutral point
    double window_s = 5.0;
    double flat_eps = 0.5;  // BPM; window ranges below this count as flat

    bool valid() const {
        return clip_lo <= base && base <= clip_hi && clip_lo < clip_hi && gain >= 0.0 &&
               window_s > 0.0 && flat_eps >= 0.0;
    }
};

struct TempoCommand {
    double multiplier = 1.0;
    double at_t = 0.0;
};

// Position of hr_now within the trailing window, clamped to [0, 1]. A flat
// window (range below flat_eps) is neutral: 0.5.
double normalize(double hr_now, const WindowStats& stats, double flat_eps);

// clamp(base * (1 + gain * (n - 0.5)), clip_lo, clip_hi). Monotone
// non-decreasing in n, total for any real n. With defaults the endpoints land
// exactly on the clip bounds.
double map_tempo(double n, const TempoParams& params);

}  // namespace pulsewarp
