#ifndef BIPHOTON_IO_HPP
#define BIPHOTON_IO_HPP

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "biphoton/config.hpp"
#include "biphoton/detection.hpp"
#include "biphoton/reconstruct.hpp"

namespace biphoton {

// CSV schemas (fixed column order):
//   histogram:      delta_ns,counts
//   trace:          applied_freq_mhz,counts
//   reconstruction: tau_ns,value
//   metrics:        flat "key value" lines
// Numbers are printed with %.12g so identical data gives identical bytes.

namespace io_detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

inline double parse_number(const std::string& s, const std::string& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("malformed number '" + s + "' in " + path);
    }
}

}  // namespace io_detail

inline void write_histogram_csv(const std::string& path, const Histogram& h) {
    std::string out = "delta_ns,counts\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        out += io_detail::format_double(h.bin_center(i) / kNs);
        out += ',';
        out += std::to_string(h.counts[i]);
        out += '\n';
    }
    io_detail::write_file(path, out);
}

inline Histogram read_histogram_csv(const std::string& path) {
    const auto lines = io_detail::read_lines(path);
    if (lines.empty() || lines[0] != "delta_ns,counts")
        throw std::runtime_error("bad histogram header in " + path);
    Histogram h;
    std::vector<double> centers;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = io_detail::split_line(lines[i]);
        if (fields.size() != 2) throw std::runtime_error("bad histogram row in " + path);
        centers.push_back(io_detail::parse_number(fields[0], path) * kNs);
        h.counts.push_back(
            static_cast<std::uint64_t>(io_detail::parse_number(fields[1], path)));
    }
    if (centers.size() < 2) throw std::runtime_error("histogram too short in " + path);
    h.bin_width = centers[1] - centers[0];
    h.origin = centers[0] - 0.5 * h.bin_width;
    return h;
}

inline void write_trace_csv(const std::string& path, const FrequencyTrace& trace) {
    std::string out = "applied_freq_mhz,counts\n";
    for (std::size_t k = 0; k < trace.frequencies.size(); ++k) {
        out += io_detail::format_double(trace.frequencies[k] / kMHz);
        out += ',';
        out += io_detail::format_double(trace.counts[k]);
        out += '\n';
    }
    io_detail::write_file(path, out);
}

inline FrequencyTrace read_trace_csv(const std::string& path) {
    const auto lines = io_detail::read_lines(path);
    // Accepts both measured traces and analytic forward-transform curves.
    if (lines.empty() ||
        (lines[0] != "applied_freq_mhz,counts" && lines[0] != "applied_freq_mhz,value"))
        throw std::runtime_error("bad trace header in " + path);
    FrequencyTrace trace;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = io_detail::split_line(lines[i]);
        if (fields.size() != 2) throw std::runtime_error("bad trace row in " + path);
        trace.frequencies.push_back(io_detail::parse_number(fields[0], path) * kMHz);
        trace.counts.push_back(io_detail::parse_number(fields[1], path));
    }
    return trace;
}

inline void write_reconstruction_csv(const std::string& path, const Reconstruction& rec,
                                     double tau_offset = 0.0) {
    std::string out = "tau_ns,value\n";
    for (std::size_t j = 0; j < rec.tau.size(); ++j) {
        out += io_detail::format_double((rec.tau[j] - tau_offset) / kNs);
        out += ',';
        out += io_detail::format_double(rec.values[j]);
        out += '\n';
    }
    io_detail::write_file(path, out);
}

inline Reconstruction read_reconstruction_csv(const std::string& path) {
    const auto lines = io_detail::read_lines(path);
    if (lines.empty() || lines[0] != "tau_ns,value")
        throw std::runtime_error("bad reconstruction header in " + path);
    Reconstruction rec;
    rec.source = path;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = io_detail::split_line(lines[i]);
        if (fields.size() != 2) throw std::runtime_error("bad reconstruction row in " + path);
        rec.tau.push_back(io_detail::parse_number(fields[0], path) * kNs);
        rec.values.push_back(io_detail::parse_number(fields[1], path));
    }
    return rec;
}

inline void write_metrics(const std::string& path, const CompareMetrics& m) {
    std::string out;
    out += "nrmse " + io_detail::format_double(m.nrmse) + "\n";
    out += "peak_shift_ns " + io_detail::format_double(m.peak_shift / kNs) + "\n";
    out += "fwhm_diff_ns " + io_detail::format_double(m.fwhm_diff / kNs) + "\n";
    out += "n_points " + std::to_string(m.n_points) + "\n";
    io_detail::write_file(path, out);
}

inline CompareMetrics read_metrics(const std::string& path) {
    CompareMetrics m;
    for (const auto& line : io_detail::read_lines(path)) {
        const auto space = line.find(' ');
        if (space == std::string::npos) throw std::runtime_error("bad metrics line in " + path);
        const std::string key = line.substr(0, space);
        const double value = io_detail::parse_number(line.substr(space + 1), path);
        if (key == "nrmse") m.nrmse = value;
        else if (key == "peak_shift_ns") m.peak_shift = value * kNs;
        else if (key == "fwhm_diff_ns") m.fwhm_diff = value * kNs;
        else if (key == "n_points") m.n_points = static_cast<std::size_t>(value);
        else throw std::runtime_error("unknown metrics key '" + key + "' in " + path);
    }
    return m;
}

// Optional event dump: t_signal_ns,t_idler_ns per row.
inline void write_events_csv(const std::string& path,
                             const std::vector<CoincidenceEvent>& events) {
    std::string out = "t_signal_ns,t_idler_ns\n";
    for (const auto& e : events) {
        out += io_detail::format_double(e.t_signal / kNs);
        out += ',';
        out += io_detail::format_double(e.t_idler / kNs);
        out += '\n';
    }
    io_detail::write_file(path, out);
}

}  // namespace biphoton

#endif
