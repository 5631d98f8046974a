#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pulsewarp/rng.hpp"
#include "pulsewarp/tempo.hpp"

namespace pulsewarp {

// First-order relaxation toward a tempo-dependent set point. A hypothesis
// tool for studying the closed loop, not a validated physiological model.
struct HeartModelParams {
    double hr0 = 70.0;   // baseline BPM
    double beta = 20.0;  // BPM per unit tempo deviation from 1.0
    double tau = 30.0;   // response time constant, seconds
    double sigma = 0.5;  // noise scale, BPM per sqrt(second)
    std::uint64_t seed = 1;

    bool valid() const { return tau > 0.0 && sigma >= 0.0; }
};

// Hard physiological clamp applied after every step.
inline constexpr double kHrClampLo = 30.0;
inline constexpr double kHrClampHi = 220.0;

// One Euler-Maruyama step:
//   hr' = hr + dt * (hr0 + beta*(tempo - 1) - hr) / tau + sigma * sqrt(dt) * N(0,1)
double step_heart(double hr, double tempo, double dt, const HeartModelParams& params,
                  GaussianRng& rng);

struct LoopPoint {
    double t = 0.0;
    double hr = 0.0;
    double multiplier = 1.0;
};

// Alternates step_heart with the shipped tempo mapping, window stats
// maintained over the simulated heart rate exactly as the engine maintains
// them over its grid. dt defaults to the engine grid spacing.
std::vector<LoopPoint> simulate_loop(const HeartModelParams& heart, const TempoParams& tempo,
                                     double duration_s, double dt = 1.0 / 55.0);

// CSV, header `t_seconds,hr_bpm,multiplier`.
void write_trajectory_csv(std::span<const LoopPoint> trajectory, const std::string& path);

}  // namespace pulsewarp
