#ifndef BIPHOTON_CONFIG_HPP
#define BIPHOTON_CONFIG_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "biphoton/detection.hpp"
#include "biphoton/montecarlo.hpp"
#include "biphoton/reconstruct.hpp"

namespace biphoton {

using nlohmann::json;

// External units: ns, MHz, s^-1. Converted to SI on load.
constexpr double kNs = 1e-9;
constexpr double kMHz = 1e6;

enum class Scenario { Histogram, ModulationDemo, Sweep, Reconstruct, Compare, Analytic };

struct SweepConfig {
    double f_start = 0.0;          // Hz
    double f_stop = 30e6;          // Hz
    double f_step = 0.25e6;        // Hz
    double integration_time = 80.0;  // s per point
    double phase = 0.0;            // rad, common drive phase
};

struct HistogramConfig {
    double bin_width = 1e-9;  // s
    double range_lo = 0.0;    // s
    double range_hi = 1e-6;   // s
};

struct ReconstructConfig {
    double tau_max = 1e-6;   // s
    double tau_step = 1e-9;  // s
    DcStrategy dc_strategy = DcStrategy::TailMean;
    bool subtract_delay = false;  // report tau relative to the idler delay
};

struct ScenarioConfig {
    Scenario scenario = Scenario::Histogram;
    SimConfig sim;  // seed, duration, efficiency, delay, source, modulators
    SweepConfig sweep;
    HistogramConfig histogram;
    ReconstructConfig reconstruct;
    std::string trace_input;           // for reconstruct
    std::string histogram_input;       // for reconstruct (scale) / compare
    std::string reconstruction_input;  // for compare
};

namespace config_detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config: " + path + ": " + what);
}

inline void check_keys(const json& obj, const std::string& path,
                       const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            fail(path.empty() ? key : path + "." + key, "unknown field");
}

inline double get_number(const json& obj, const std::string& path, const std::string& key,
                         double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

inline double get_number_in(const json& obj, const std::string& path, const std::string& key,
                            double fallback, double lo, double hi) {
    const double v = get_number(obj, path, key, fallback);
    if (v < lo || v > hi)
        fail(path + "." + key, "value " + std::to_string(v) + " outside valid range [" +
                                   std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
}

inline std::string get_string(const json& obj, const std::string& path, const std::string& key,
                              const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) fail(path + "." + key, "expected a string");
    return obj[key].get<std::string>();
}

inline json get_object(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) return json::object();
    if (!obj[key].is_object()) fail(path.empty() ? key : path + "." + key, "expected an object");
    return obj[key];
}

inline std::vector<double> get_array(const json& obj, const std::string& path,
                                     const std::string& key) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required field");
    if (!obj[key].is_array()) fail(path + "." + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : obj[key]) {
        if (!v.is_number()) fail(path + "." + key, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline WaveformModel parse_waveform(const json& obj, const std::string& path) {
    const std::string type = get_string(obj, path, "type", "gaussian");
    if (type == "gaussian") {
        check_keys(obj, path, {"type", "amplitude", "center_ns", "sigma_ns"});
        GaussianLike g;
        g.amplitude = get_number_in(obj, path, "amplitude", 1e6, 0.0, 1e300);
        g.center = get_number(obj, path, "center_ns", 200.0) * kNs;
        g.sigma = get_number_in(obj, path, "sigma_ns", 50.0, 1e-12, 1e12) * kNs;
        return g;
    }
    if (type == "rect-precursor") {
        check_keys(obj, path,
                   {"type", "body_amplitude", "body_start_ns", "body_length_ns",
                    "spike_amplitude", "spike_decay_ns"});
        RectPrecursor r;
        r.body_amplitude = get_number_in(obj, path, "body_amplitude", 1e6, 0.0, 1e300);
        r.body_start = get_number(obj, path, "body_start_ns", 50.0) * kNs;
        r.body_length = get_number_in(obj, path, "body_length_ns", 400.0, 1e-3, 1e12) * kNs;
        r.spike_amplitude = get_number_in(obj, path, "spike_amplitude", 0.0, 0.0, 1e300);
        r.spike_decay = get_number_in(obj, path, "spike_decay_ns", 10.0, 1e-3, 1e12) * kNs;
        return r;
    }
    if (type == "tabulated") {
        check_keys(obj, path, {"type", "times_ns", "values"});
        Tabulated t;
        for (double v : get_array(obj, path, "times_ns")) t.times.push_back(v * kNs);
        t.values = get_array(obj, path, "values");
        return t;
    }
    fail(path + ".type", "unknown waveform type '" + type + "'");
}

inline ModulatorWaveform parse_modulator(const json& obj, const std::string& path) {
    const std::string type = get_string(obj, path, "type", "open");
    if (type == "open") {
        check_keys(obj, path, {"type"});
        return Open{};
    }
    if (type == "sinusoid") {
        check_keys(obj, path, {"type", "frequency_mhz", "phase_rad"});
        Sinusoid s;
        s.frequency = get_number_in(obj, path, "frequency_mhz", 35.0, 1e-9, 1e9) * kMHz;
        s.phase = get_number(obj, path, "phase_rad", 0.0);
        return s;
    }
    if (type == "square") {
        check_keys(obj, path, {"type", "frequency_mhz", "phase_rad", "duty"});
        Square s;
        s.frequency = get_number_in(obj, path, "frequency_mhz", 35.0, 1e-9, 1e9) * kMHz;
        s.phase = get_number(obj, path, "phase_rad", 0.0);
        s.duty = get_number_in(obj, path, "duty", 0.5, 1e-6, 1.0 - 1e-6);
        return s;
    }
    if (type == "tabulated") {
        check_keys(obj, path, {"type", "period_ns", "values"});
        TabulatedPeriodic t;
        t.period = get_number_in(obj, path, "period_ns", 0.0, 1e-6, 1e12) * kNs;
        t.values = get_array(obj, path, "values");
        return t;
    }
    fail(path + ".type", "unknown modulator type '" + type + "'");
}

}  // namespace config_detail

// Parses and validates a scenario config. Unknown fields, duplicate keys,
// and out-of-range values are hard errors naming the offending field.
inline ScenarioConfig parse_config(const std::string& text) {
    using namespace config_detail;

    std::vector<std::set<std::string>> key_stack;
    const auto callback = [&](int, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::object_start) {
            key_stack.emplace_back();
        } else if (event == json::parse_event_t::object_end) {
            key_stack.pop_back();
        } else if (event == json::parse_event_t::key) {
            const auto key = parsed.get<std::string>();
            if (!key_stack.back().insert(key).second)
                throw std::invalid_argument("config: duplicate key '" + key + "'");
        }
        return true;
    };
    json root;
    try {
        root = json::parse(text, callback);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");

    check_keys(root, "",
               {"scenario", "seed", "source", "modulators", "sim", "sweep", "histogram",
                "reconstruct", "inputs"});

    ScenarioConfig cfg;
    const std::string scenario = get_string(root, "", "scenario", "histogram");
    if (scenario == "histogram") cfg.scenario = Scenario::Histogram;
    else if (scenario == "modulation-demo") cfg.scenario = Scenario::ModulationDemo;
    else if (scenario == "sweep") cfg.scenario = Scenario::Sweep;
    else if (scenario == "reconstruct") cfg.scenario = Scenario::Reconstruct;
    else if (scenario == "compare") cfg.scenario = Scenario::Compare;
    else if (scenario == "analytic") cfg.scenario = Scenario::Analytic;
    else fail("scenario", "unknown scenario '" + scenario + "'");

    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) fail("seed", "expected an unsigned integer");
        cfg.sim.seed = root["seed"].get<std::uint64_t>();
    }

    const json source = get_object(root, "", "source");
    check_keys(source, "source", {"waveform", "pair_rate_hz", "t_max_ns"});
    cfg.sim.source.waveform = source.contains("waveform")
                                  ? parse_waveform(source["waveform"], "source.waveform")
                                  : WaveformModel{GaussianLike{1e6, 200e-9, 50e-9}};
    cfg.sim.source.pair_rate = get_number_in(source, "source", "pair_rate_hz", 325.0, 0.0, 1e300);
    cfg.sim.source.t_max = get_number_in(source, "source", "t_max_ns", 1000.0, 1e-3, 1e12) * kNs;

    const json mods = get_object(root, "", "modulators");
    check_keys(mods, "modulators", {"m1", "m2"});
    cfg.sim.modulators.m1 =
        mods.contains("m1") ? parse_modulator(mods["m1"], "modulators.m1") : ModulatorWaveform{Open{}};
    cfg.sim.modulators.m2 =
        mods.contains("m2") ? parse_modulator(mods["m2"], "modulators.m2") : ModulatorWaveform{Open{}};

    const json sim = get_object(root, "", "sim");
    check_keys(sim, "sim", {"duration_s", "efficiency", "idler_delay_ns"});
    cfg.sim.duration = get_number_in(sim, "sim", "duration_s", 80.0, 1e-12, 1e12);
    cfg.sim.efficiency = get_number_in(sim, "sim", "efficiency", 0.5, 0.0, 1.0);
    cfg.sim.idler_delay = get_number_in(sim, "sim", "idler_delay_ns", 0.0, 0.0, 1e12) * kNs;

    const json sweep = get_object(root, "", "sweep");
    check_keys(sweep, "sweep",
               {"start_mhz", "stop_mhz", "step_mhz", "integration_s", "phase_rad"});
    cfg.sweep.f_start = get_number_in(sweep, "sweep", "start_mhz", 0.0, 0.0, 1e9) * kMHz;
    cfg.sweep.f_stop = get_number_in(sweep, "sweep", "stop_mhz", 30.0, 0.0, 1e9) * kMHz;
    cfg.sweep.f_step = get_number_in(sweep, "sweep", "step_mhz", 0.25, 1e-9, 1e9) * kMHz;
    cfg.sweep.integration_time = get_number_in(sweep, "sweep", "integration_s", 80.0, 1e-12, 1e12);
    cfg.sweep.phase = get_number(sweep, "sweep", "phase_rad", 0.0);
    if (cfg.sweep.f_stop < cfg.sweep.f_start) fail("sweep.stop_mhz", "must be >= start_mhz");

    const json hist = get_object(root, "", "histogram");
    check_keys(hist, "histogram", {"bin_ns", "range_ns"});
    cfg.histogram.bin_width = get_number_in(hist, "histogram", "bin_ns", 1.0, 1e-6, 1e12) * kNs;
    if (hist.contains("range_ns")) {
        const auto range = get_array(hist, "histogram", "range_ns");
        if (range.size() != 2 || !(range[1] > range[0]))
            fail("histogram.range_ns", "expected [lo, hi] with hi > lo");
        cfg.histogram.range_lo = range[0] * kNs;
        cfg.histogram.range_hi = range[1] * kNs;
    }

    const json rec = get_object(root, "", "reconstruct");
    check_keys(rec, "reconstruct", {"tau_max_ns", "tau_step_ns", "dc_strategy", "subtract_delay"});
    cfg.reconstruct.tau_max = get_number_in(rec, "reconstruct", "tau_max_ns", 1000.0, 1e-3, 1e12) * kNs;
    cfg.reconstruct.tau_step = get_number_in(rec, "reconstruct", "tau_step_ns", 1.0, 1e-6, 1e12) * kNs;
    const std::string dc = get_string(rec, "reconstruct", "dc_strategy", "tail-mean");
    if (dc == "tail-mean") cfg.reconstruct.dc_strategy = DcStrategy::TailMean;
    else if (dc == "global-mean") cfg.reconstruct.dc_strategy = DcStrategy::GlobalMean;
    else fail("reconstruct.dc_strategy", "expected 'tail-mean' or 'global-mean'");
    if (rec.contains("subtract_delay")) {
        if (!rec["subtract_delay"].is_boolean()) fail("reconstruct.subtract_delay", "expected a boolean");
        cfg.reconstruct.subtract_delay = rec["subtract_delay"].get<bool>();
    }

    const json inputs = get_object(root, "", "inputs");
    check_keys(inputs, "inputs", {"trace", "histogram", "reconstruction"});
    cfg.trace_input = get_string(inputs, "inputs", "trace", "");
    cfg.histogram_input = get_string(inputs, "inputs", "histogram", "");
    cfg.reconstruction_input = get_string(inputs, "inputs", "reconstruction", "");

    validate(cfg.sim);
    return cfg;
}

}  // namespace biphoton

#endif
