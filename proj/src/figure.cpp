#include "pulsewarp/figure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "pulsewarp/errors.hpp"

namespace pulsewarp {

namespace {

constexpr int kWidth = 960;
constexpr int kPanelHeight = 170;
constexpr int kPanelGap = 42;
constexpr int kMarginLeft = 78;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 34;
constexpr int kMarginBottom = 42;

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

struct Panel {
    const char* title;
    double (*value)(const TraceRecord&);
};

void append_panel(std::string& svg, const Panel& panel, std::span<const TraceRecord> trace,
                  int top, double t_max) {
    double lo = panel.value(trace.front());
    double hi = lo;
    for (const auto& r : trace) {
        lo = std::min(lo, panel.value(r));
        hi = std::max(hi, panel.value(r));
    }
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }

    const int plot_w = kWidth - kMarginLeft - kMarginRight;
    const int plot_h = kPanelHeight;
    const double x_span = t_max > 0.0 ? t_max : 1.0;

    auto x_of = [&](double t) { return kMarginLeft + t / x_span * plot_w; };
    auto y_of = [&](double v) { return top + plot_h - (v - lo) / (hi - lo) * plot_h; };

    svg += "<g class=\"panel\">\n";
    svg += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(top) +
           "\" width=\"" + std::to_string(plot_w) + "\" height=\"" + std::to_string(plot_h) +
           "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg += "<text x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(top - 8) +
           "\" class=\"title\">" + panel.title + "</text>\n";
    // y extrema labels
    svg += "<text x=\"" + std::to_string(kMarginLeft - 6) + "\" y=\"" + std::to_string(top + 12) +
           "\" class=\"tick\" text-anchor=\"end\">" + fmt(hi) + "</text>\n";
    svg += "<text x=\"" + std::to_string(kMarginLeft - 6) + "\" y=\"" +
           std::to_string(top + plot_h) + "\" class=\"tick\" text-anchor=\"end\">" + fmt(lo) +
           "</text>\n";

    svg += "<polyline fill=\"none\" stroke=\"#0a5fb4\" stroke-width=\"1\" points=\"";
    for (const auto& r : trace) {
        svg += fmt(x_of(r.t), "%.2f");
        svg += ',';
        svg += fmt(y_of(panel.value(r)), "%.2f");
        svg += ' ';
    }
    svg += "\"/>\n</g>\n";
}

}  // namespace

void write_trace_figure(std::span<const TraceRecord> trace, const std::string& svg_path) {
    if (trace.empty()) throw std::invalid_argument("cannot plot an empty trace");

    const double t_max = trace.back().t;
    const Panel panels[3] = {
        {"RMS amplitude", [](const TraceRecord& r) { return r.rms_amplitude; }},
        {"Heart rate (BPM)", [](const TraceRecord& r) { return r.hr_bpm; }},
        {"Tempo multiplier", [](const TraceRecord& r) { return r.multiplier; }},
    };

    const int height = kMarginTop + 3 * kPanelHeight + 2 * kPanelGap + kMarginBottom;
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
           std::to_string(kWidth) + " " + std::to_string(height) + "\" data-t-max=\"" +
           fmt(t_max) + "\">\n";
    svg += "<style>text{font-family:sans-serif;font-size:12px}.title{font-size:13px;"
           "font-weight:bold}.tick{fill:#555;font-size:10px}</style>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (int p = 0; p < 3; ++p) {
        const int top = kMarginTop + p * (kPanelHeight + kPanelGap);
        append_panel(svg, panels[p], trace, top, t_max);
    }

    // shared time axis under the last panel
    const int axis_y = kMarginTop + 3 * kPanelHeight + 2 * kPanelGap + 16;
    svg += "<text x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(axis_y) +
           "\" class=\"tick\">0</text>\n";
    svg += "<text x=\"" + std::to_string(kWidth - kMarginRight) + "\" y=\"" +
           std::to_string(axis_y) + "\" class=\"tick\" text-anchor=\"end\">" + fmt(t_max) +
           " s</text>\n";
    svg += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"" + std::to_string(axis_y) +
           "\" class=\"tick\" text-anchor=\"middle\">time (s)</text>\n";
    svg += "</svg>\n";

    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw IoFailure("cannot write figure: " + svg_path);
    out << svg;
    if (!out) throw IoFailure("write failed: " + svg_path);
}

}  // namespace pulsewarp
