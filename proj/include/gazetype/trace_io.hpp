#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gazetype/error.hpp"
#include "gazetype/types.hpp"

namespace gazetype {

/// Trace file format: UTF-8 CSV with header
///   t_ms,yaw_deg,pitch_deg,ear[,label]
/// and '.' as the decimal separator. Keystroke ground truth lives in a
/// sidecar CSV with header `t_ms,key`.
namespace trace_io {

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s, long line_no) {
    if (s.empty()) throw ParseError("empty numeric field", line_no);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ParseError("bad numeric field '" + s + "'", line_no);
    return v;
}

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace detail

inline GazeTrace load_trace(std::istream& in) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty trace file", 1);
    ++line_no;
    auto header = detail::split_csv(line);
    const bool labeled = header.size() == 5 && header[4] == "label";
    if (!(header.size() == 4 || labeled) || header[0] != "t_ms" || header[1] != "yaw_deg" ||
        header[2] != "pitch_deg" || header[3] != "ear")
        throw ParseError("bad trace header '" + line + "'", line_no);

    GazeTrace trace;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = detail::split_csv(line);
        if (fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields", line_no);
        GazeSample s;
        s.t_ms = detail::parse_double(fields[0], line_no);
        s.yaw_deg = detail::parse_double(fields[1], line_no);
        s.pitch_deg = detail::parse_double(fields[2], line_no);
        s.ear = detail::parse_double(fields[3], line_no);
        if (!sample_in_range(s)) throw ParseError("sample out of range", line_no);
        if (!trace.samples.empty() && s.t_ms <= trace.samples.back().t_ms)
            throw NonMonotonicTimestamps("timestamps not strictly increasing (line " +
                                         std::to_string(line_no) + ")");
        if (labeled) {
            const double lv = detail::parse_double(fields[4], line_no);
            if (lv != 0.0 && lv != 1.0) throw ParseError("label must be 0 or 1", line_no);
            trace.labels.push_back(static_cast<int>(lv));
        }
        trace.samples.push_back(s);
    }
    if (trace.samples.empty()) throw ParseError("trace has no samples", line_no);
    trace.sample_rate_hz = infer_sample_rate_hz(trace.samples);
    return trace;
}

inline void save_trace(const GazeTrace& trace, std::ostream& out) {
    trace.validate();
    const bool labeled = trace.has_labels();
    out << "t_ms,yaw_deg,pitch_deg,ear" << (labeled ? ",label" : "") << "\n";
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const auto& s = trace.samples[i];
        out << detail::format_double(s.t_ms) << ',' << detail::format_double(s.yaw_deg) << ','
            << detail::format_double(s.pitch_deg) << ',' << detail::format_double(s.ear);
        if (labeled) out << ',' << trace.labels[i];
        out << '\n';
    }
}

inline GazeTrace load_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trace file '" + path + "'");
    return load_trace(in);
}

inline void save_trace_file(const GazeTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    save_trace(trace, out);
}

inline std::vector<KeystrokeLabel> load_keystrokes(std::istream& in) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty keystroke file", 1);
    ++line_no;
    auto header = detail::split_csv(line);
    if (header.size() != 2 || header[0] != "t_ms" || header[1] != "key")
        throw ParseError("bad keystroke header '" + line + "'", line_no);
    std::vector<KeystrokeLabel> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = detail::split_csv(line);
        if (fields.size() != 2) throw ParseError("expected 2 fields", line_no);
        if (fields[1].empty()) throw ParseError("empty key", line_no);
        out.push_back({detail::parse_double(fields[0], line_no), fields[1]});
    }
    return out;
}

inline void save_keystrokes(const std::vector<KeystrokeLabel>& keys, std::ostream& out) {
    out << "t_ms,key\n";
    for (const auto& k : keys) out << detail::format_double(k.t_ms) << ',' << k.key << '\n';
}

inline std::vector<KeystrokeLabel> load_keystrokes_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open keystroke file '" + path + "'");
    return load_keystrokes(in);
}

inline void save_keystrokes_file(const std::vector<KeystrokeLabel>& keys,
                                 const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    save_keystrokes(keys, out);
}

}  // namespace trace_io
}  // namespace gazetype
