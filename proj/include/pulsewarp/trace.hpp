#pragma once

#include <span>
#include <string>
#include <vector>

namespace pulsewarp {

// One row per emitted chunk, backing the stacked amplitude / heart rate /
// multiplier figure.
struct TraceRecord {
    double t = 0.0;              // seconds since playback start
    double rms_amplitude = 0.0;  // RMS of the emitted chunk
    double hr_bpm = 0.0;         // heart rate used for this chunk
    double multiplier = 1.0;     // tempo applied to this chunk
};

// CSV, header `t_seconds,rms_amplitude,hr_bpm,multiplier`, shortest
// round-trip-exact decimal values, LF endings.
void write_trace_csv(std::span<const TraceRecord> trace, const std::string& path);
std::vector<TraceRecord> read_trace_csv(const std::string& path);

}  // namespace pulsewarp
