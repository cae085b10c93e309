#ifndef BIPHOTON_SCENARIO_HPP
#define BIPHOTON_SCENARIO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "biphoton/config.hpp"
#include "biphoton/io.hpp"
#include "biphoton/reconstruct.hpp"

namespace biphoton {

inline std::vector<double> tau_grid(const ReconstructConfig& rc) {
    std::vector<double> grid;
    const std::size_t n =
        static_cast<std::size_t>(std::round(rc.tau_max / rc.tau_step)) + 1;
    grid.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
        grid.push_back(rc.tau_step * static_cast<double>(j));
    return grid;
}

// Executes one scenario, writing its output files under out_dir.
// Returns the list of files written. All randomness flows from the
// config seed; repeated runs produce byte-identical files.
inline std::vector<std::string> run_scenario(const ScenarioConfig& cfg,
                                             const std::string& out_dir,
                                             unsigned n_threads = 1) {
    const std::string prefix = out_dir.empty() ? "" : out_dir + "/";
    std::vector<std::string> written;

    switch (cfg.scenario) {
        case Scenario::Histogram: {
            const auto events = simulate_events(cfg.sim, 0);
            const auto hist =
                histogram_coincidences(events, cfg.histogram.bin_width, cfg.histogram.range_lo,
                                       cfg.histogram.range_hi, cfg.sim.duration);
            write_histogram_csv(prefix + "histogram.csv", hist);
            written.push_back(prefix + "histogram.csv");
            break;
        }
        case Scenario::ModulationDemo: {
            SimConfig reference = cfg.sim;
            reference.modulators = {Open{}, Open{}};
            const auto ref_events = simulate_events(reference, 0);
            const auto mod_events = simulate_events(cfg.sim, 1);
            const auto ref_hist =
                histogram_coincidences(ref_events, cfg.histogram.bin_width,
                                       cfg.histogram.range_lo, cfg.histogram.range_hi,
                                       cfg.sim.duration);
            const auto mod_hist =
                histogram_coincidences(mod_events, cfg.histogram.bin_width,
                                       cfg.histogram.range_lo, cfg.histogram.range_hi,
                                       cfg.sim.duration);
            write_histogram_csv(prefix + "demo_reference.csv", ref_hist);
            write_histogram_csv(prefix + "demo_modulated.csv", mod_hist);
            written.push_back(prefix + "demo_reference.csv");
            written.push_back(prefix + "demo_modulated.csv");
            break;
        }
        case Scenario::Sweep: {
            const auto grid = uniform_grid(cfg.sweep.f_start, cfg.sweep.f_stop, cfg.sweep.f_step);
            const auto trace = run_frequency_sweep(cfg.sim, grid, cfg.sweep.integration_time,
                                                   cfg.sweep.phase, n_threads);
            write_trace_csv(prefix + "trace.csv", trace);
            written.push_back(prefix + "trace.csv");
            break;
        }
        case Scenario::Reconstruct: {
            if (cfg.trace_input.empty())
                throw std::runtime_error("reconstruct scenario requires inputs.trace");
            const auto trace = read_trace_csv(cfg.trace_input);
            auto rec = cosine_transform(remove_dc(trace, cfg.reconstruct.dc_strategy),
                                        tau_grid(cfg.reconstruct));
            if (!cfg.histogram_input.empty())
                rec = one_point_scale(rec, read_histogram_csv(cfg.histogram_input));
            const double offset = cfg.reconstruct.subtract_delay ? cfg.sim.idler_delay : 0.0;
            write_reconstruction_csv(prefix + "reconstruction.csv", rec, offset);
            written.push_back(prefix + "reconstruction.csv");
            break;
        }
        case Scenario::Compare: {
            if (cfg.reconstruction_input.empty() || cfg.histogram_input.empty())
                throw std::runtime_error(
                    "compare scenario requires inputs.reconstruction and inputs.histogram");
            const auto rec = read_reconstruction_csv(cfg.reconstruction_input);
            const auto hist = read_histogram_csv(cfg.histogram_input);
            write_metrics(prefix + "metrics.txt", compare(rec, hist));
            written.push_back(prefix + "metrics.txt");
            break;
        }
        case Scenario::Analytic: {
            const auto grid = tau_grid(cfg.reconstruct);
            // M(tau) over the tau grid.
            {
                std::string out = "tau_ns,value\n";
                for (double t : grid) {
                    double m;
                    try {
                        m = modulator_correlation_analytic(cfg.sim.modulators, t);
                    } catch (const std::invalid_argument&) {
                        m = modulator_correlation(cfg.sim.modulators, t);
                    }
                    out += io_detail::format_double(t / kNs) + "," +
                           io_detail::format_double(m) + "\n";
                }
                io_detail::write_file(prefix + "analytic_m.csv", out);
                written.push_back(prefix + "analytic_m.csv");
            }
            // G2_0(tau) over the tau grid.
            {
                std::string out = "tau_ns,value\n";
                for (double t : grid)
                    out += io_detail::format_double(t / kNs) + "," +
                           io_detail::format_double(g2_zero(cfg.sim.source, t)) + "\n";
                io_detail::write_file(prefix + "analytic_g2.csv", out);
                written.push_back(prefix + "analytic_g2.csv");
            }
            // Forward transform over the sweep grid.
            {
                const auto f_grid =
                    uniform_grid(cfg.sweep.f_start, cfg.sweep.f_stop, cfg.sweep.f_step);
                std::string out = "applied_freq_mhz,value\n";
                for (double f : f_grid)
                    out += io_detail::format_double(f / kMHz) + "," +
                           io_detail::format_double(forward_transform(cfg.sim.source, f)) + "\n";
                io_detail::write_file(prefix + "analytic_f.csv", out);
                written.push_back(prefix + "analytic_f.csv");
            }
            break;
        }
    }
    return written;
}

}  // namespace biphoton

#endif
