#pragma once

#include <span>
#include <string>

#include "pulsewarp/trace.hpp"

namespace pulsewarp {

// Three stacked panels over a shared time axis: chunk RMS amplitude, heart
// rate, tempo multiplier. SVG output, deterministic byte-for-byte for a given
// trace.
void write_trace_figure(std::span<const TraceRecord> trace, const std::string& svg_path);

}  // namespace pulsewarp
