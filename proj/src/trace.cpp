#include "pulsewarp/trace.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "pulsewarp/errors.hpp"

namespace pulsewarp {

namespace {

constexpr const char* kTraceHeader = "t_seconds,rms_amplitude,hr_bpm,multiplier";

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double_or_throw(const std::string& field, std::size_t row) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
        throw CorruptFile("trace row " + std::to_string(row) + ": bad number `" + field + "`");
    }
    return v;
}

}  // namespace

void write_trace_csv(std::span<const TraceRecord> trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write trace file: " + path);
    out << kTraceHeader << '\n';
    for (const auto& r : trace) {
        out << format_double(r.t) << ',' << format_double(r.rms_amplitude) << ','
            << format_double(r.hr_bpm) << ',' << format_double(r.multiplier) << '\n';
    }
    if (!out) throw IoFailure("write failed: " + path);
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open trace file: " + path);
    std::string line;
    if (!std::getline(in, line) || (line != kTraceHeader && line != std::string(kTraceHeader) + "\r")) {
        throw CorruptFile("trace file missing header: " + path);
    }
    std::vector<TraceRecord> rows;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 4) {
            throw CorruptFile("trace row " + std::to_string(row) + ": expected 4 columns");
        }
        rows.push_back(TraceRecord{parse_double_or_throw(fields[0], row),
                                   parse_double_or_throw(fields[1], row),
                                   parse_double_or_throw(fields[2], row),
                                   parse_double_or_throw(fields[3], row)});
    }
    return rows;
}

}  // namespace pulsewarp
