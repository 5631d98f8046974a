#include "pulsewarp/loop_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "pulsewarp/errors.hpp"
#include "pulsewarp/signal.hpp"

namespace pulsewarp {

double step_heart(double hr, double tempo, double dt, const HeartModelParams& params,
                  GaussianRng& rng) {
    const double target = params.hr0 + params.beta * (tempo - 1.0);
    const double next = hr + dt * (target - hr) / params.tau +
                        params.sigma * std::sqrt(dt) * rng.gaussian();
    return std::clamp(next, kHrClampLo, kHrClampHi);
}

std::vector<LoopPoint> simulate_loop(const HeartModelParams& heart, const TempoParams& tempo,
                                     double duration_s, double dt) {
    if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!heart.valid()) throw std::invalid_argument("invalid heart model parameters");
    if (!tempo.valid()) throw std::invalid_argument("invalid tempo parameters");

    GaussianRng rng(heart.seed);
    RollingWindow window(tempo.window_s);

    const auto steps = static_cast<std::size_t>(std::llround(duration_s / dt));
    std::vector<LoopPoint> trajectory;
    trajectory.reserve(steps);

    double hr = std::clamp(heart.hr0, kHrClampLo, kHrClampHi);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        window.push(t, hr);
        const WindowStats stats = window.stats_at(t).value();  // never empty here
        const double multiplier = map_tempo(normalize(hr, stats, tempo.flat_eps), tempo);
        trajectory.push_back(LoopPoint{t, hr, multiplier});
        hr = step_heart(hr, multiplier, dt, heart, rng);
    }
    return trajectory;
}

void write_trajectory_csv(std::span<const LoopPoint> trajectory, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write trajectory file: " + path);
    auto fmt = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    out << "t_seconds,hr_bpm,multiplier\n";
    for (const auto& p : trajectory) {
        out << fmt(p.t) << ',' << fmt(p.hr) << ',' << fmt(p.multiplier) << '\n';
    }
    if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace pulsewarp
