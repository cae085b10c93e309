#ifndef BIPHOTON_MONTECARLO_HPP
#define BIPHOTON_MONTECARLO_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "biphoton/modulator.hpp"
#include "biphoton/rng.hpp"
#include "biphoton/waveform.hpp"

namespace biphoton {

struct SimConfig {
    std::uint64_t seed = 0;
    double duration = 1.0;     // T_run, s
    double efficiency = 0.5;   // per-channel detector efficiency, [0,1]
    double idler_delay = 0.0;  // fiber delay D on the idler channel, s
    BiphotonSpec source;
    ModulatorPair modulators;
};

inline void validate(const SimConfig& config) {
    if (!(config.duration > 0.0)) throw std::invalid_argument("sim: duration must be > 0");
    if (config.efficiency < 0.0 || config.efficiency > 1.0)
        throw std::invalid_argument("sim: efficiency must be in [0,1]");
    if (config.idler_delay < 0.0) throw std::invalid_argument("sim: idler delay must be >= 0");
    validate(config.source);
    validate(config.modulators.m1);
    validate(config.modulators.m2);
}

// A generated pair before thinning: absolute arrival time t of the
// signal photon at its modulator and relative delay tau of the idler.
struct GeneratedPair {
    double t;    // s, uniform on [0, duration)
    double tau;  // s, distributed as G2_0 / integral
};

struct CoincidenceEvent {
    double t_signal;  // s
    double t_idler;   // s
    double delta() const { return t_idler - t_signal; }
};

// Poisson(R * T_run) pairs, each with uniform arrival time and a
// waveform-distributed relative delay. Deterministic given rng state.
inline std::vector<GeneratedPair> generate_pairs(const SimConfig& config, SplitMix64& rng) {
    const double mean = config.source.pair_rate * config.duration;
    std::vector<GeneratedPair> pairs;
    if (mean <= 0.0) return pairs;
    const std::uint64_t n = rng.poisson(mean);
    pairs.reserve(n);
    const TauSampler sampler(config.source);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double t = rng.uniform(config.duration);
        const double tau = sampler.sample(rng);
        pairs.push_back({t, tau});
    }
    return pairs;
}

// Bernoulli thinning: signal survives with eps*|m1(t)|^2, idler with
// eps*|m2(t+D+tau)|^2 (the fiber delay precedes the idler modulator).
// Only pairs with both survivors are emitted.
inline std::vector<CoincidenceEvent> thin_and_detect(const std::vector<GeneratedPair>& pairs,
                                                     const SimConfig& config,
                                                     SplitMix64& rng) {
    std::vector<CoincidenceEvent> events;
    events.reserve(pairs.size());
    const double eps = config.efficiency;
    for (const auto& p : pairs) {
        const double t_idler = p.t + config.idler_delay + p.tau;
        const double p_signal = eps * intensity_transmission(config.modulators.m1, p.t);
        const double p_idler = eps * intensity_transmission(config.modulators.m2, t_idler);
        const bool signal_survives = rng.bernoulli(p_signal);
        const bool idler_survives = rng.bernoulli(p_idler);
        if (signal_survives && idler_survives)
            events.push_back({p.t, t_idler});
    }
    return events;
}

// Convenience: generate and thin in one pass from a derived stream.
inline std::vector<CoincidenceEvent> simulate_events(const SimConfig& config,
                                                     std::uint64_t stream = 0) {
    SplitMix64 rng(config.seed, stream);
    return thin_and_detect(generate_pairs(config, rng), config, rng);
}

// Expected coincidence count rate per bin of width delta_t at relative
// delay tau: eps^2 * delta_t * M(tau + D) * G2_0(tau). Reduces to
// eps^2 * delta_t * G2_0(tau) for Open modulators.
inline double expected_coincidence_rate(const SimConfig& config, double tau, double delta_t) {
    if (!(delta_t > 0.0)) throw std::invalid_argument("rate: bin width must be > 0");
    const double m = modulator_correlation(config.modulators, tau + config.idler_delay);
    return config.efficiency * config.efficiency * delta_t * m * g2_zero(config.source, tau);
}

}  // namespace biphoton

#endif
