#ifndef BIPHOTON_DETECTION_HPP
#define BIPHOTON_DETECTION_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "biphoton/montecarlo.hpp"

namespace biphoton {

// TDC emulation: coincidence time differences binned into contiguous
// bins of width bin_width starting at origin.
struct Histogram {
    double bin_width = 0.0;            // s
    double origin = 0.0;               // s
    std::vector<std::uint64_t> counts;
    std::uint64_t dropped = 0;         // events outside [origin, origin + n*width)
    double integration_time = 0.0;     // s

    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (auto c : counts) sum += c;
        return sum;
    }

    double bin_center(std::size_t i) const {
        return origin + bin_width * (static_cast<double>(i) + 0.5);
    }

    Histogram& merge(const Histogram& other) {
        if (other.counts.size() != counts.size() || other.bin_width != bin_width ||
            other.origin != origin)
            throw std::invalid_argument("histogram: incompatible binning");
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
        dropped += other.dropped;
        integration_time += other.integration_time;
        return *this;
    }
};

inline Histogram histogram_coincidences(const std::vector<CoincidenceEvent>& events,
                                        double bin_width, double range_lo, double range_hi,
                                        double integration_time = 0.0) {
    if (!(bin_width > 0.0)) throw std::invalid_argument("histogram: bin width must be > 0");
    if (!(range_hi > range_lo)) throw std::invalid_argument("histogram: empty range");
    Histogram h;
    h.bin_width = bin_width;
    h.origin = range_lo;
    h.integration_time = integration_time;
    const std::size_t n_bins =
        static_cast<std::size_t>(std::ceil((range_hi - range_lo) / bin_width - 1e-9));
    h.counts.assign(n_bins, 0);
    for (const auto& e : events) {
        const double delta = e.delta();
        const double pos = (delta - range_lo) / bin_width;
        if (pos < 0.0 || pos >= static_cast<double>(n_bins)) {
            ++h.dropped;
            continue;
        }
        ++h.counts[static_cast<std::size_t>(pos)];
    }
    return h;
}

// Slow-detector emulation: total coincidences whose time difference
// falls in the first slow bin [origin, origin + slow_bin). The whole
// waveform (D + t_max) must fit inside that bin.
inline std::uint64_t integrate_first_slow_bin(const std::vector<CoincidenceEvent>& events,
                                              const SimConfig& config,
                                              double slow_bin = 1e-6, double origin = 0.0) {
    if (config.idler_delay + config.source.t_max > origin + slow_bin)
        throw std::invalid_argument("waveform exceeds slow bin");
    std::uint64_t count = 0;
    for (const auto& e : events) {
        const double delta = e.delta();
        if (delta >= origin && delta < origin + slow_bin) ++count;
    }
    return count;
}

// One sweep of the applied modulation frequency: counts in the first
// slow bin per frequency point.
struct FrequencyTrace {
    std::vector<double> frequencies;     // Hz, strictly increasing
    std::vector<double> counts;          // N_k (double so DC removal can subtract)
    double integration_time = 0.0;       // s per point
    SimConfig config;                    // snapshot (modulators vary per point)
};

inline std::vector<double> uniform_grid(double f_start, double f_stop, double f_step) {
    if (!(f_step > 0.0) || !(f_stop >= f_start))
        throw std::invalid_argument("sweep: bad frequency grid");
    std::vector<double> grid;
    const std::size_t n = static_cast<std::size_t>(std::round((f_stop - f_start) / f_step)) + 1;
    grid.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        grid.push_back(f_start + f_step * static_cast<double>(k));
    return grid;
}

// Runs an independent simulation per frequency point with both
// modulators set to matched sinusoids at f_k. An exact f_k = 0 would
// freeze the drive at cos^2(phase), but any real sweep point covers many
// drive cycles per integration, so f_k = 0 is simulated at the slowest
// frequency that still phase-averages: enough cycles over t_int while
// staying flat across any sub-microsecond waveform. This keeps the
// trace continuous with the f -> 0 trend.
// Each point draws from stream k, so results do not depend on
// evaluation order or thread count.
inline FrequencyTrace run_frequency_sweep(const SimConfig& config,
                                          const std::vector<double>& f_grid,
                                          double t_int, double phase = 0.0,
                                          unsigned n_threads = 1) {
    for (std::size_t k = 1; k < f_grid.size(); ++k)
        if (!(f_grid[k] > f_grid[k - 1]))
            throw std::invalid_argument("sweep: frequencies must be strictly increasing");
    FrequencyTrace trace;
    trace.frequencies = f_grid;
    trace.counts.assign(f_grid.size(), 0.0);
    trace.integration_time = t_int;
    trace.config = config;

    const auto run_point = [&](std::size_t k) {
        SimConfig point = config;
        point.duration = t_int;
        const double f_floor = 1000.0 / t_int;  // >= 1000 drive cycles per point
        const double f_point = std::max(f_grid[k], f_floor);
        point.modulators.m1 = Sinusoid{f_point, phase};
        point.modulators.m2 = Sinusoid{f_point, phase};
        const auto events = simulate_events(point, k);
        trace.counts[k] =
            static_cast<double>(integrate_first_slow_bin(events, point));
    };

    if (n_threads <= 1) {
        for (std::size_t k = 0; k < f_grid.size(); ++k) run_point(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w)
            workers.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < f_grid.size();
                     k = next.fetch_add(1))
                    run_point(k);
            });
        for (auto& t : workers) t.join();
    }
    return trace;
}

}  // namespace biphoton

#endif
