#ifndef BIPHOTON_WAVEFORM_HPP
#define BIPHOTON_WAVEFORM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "biphoton/quadrature.hpp"
#include "biphoton/rng.hpp"

namespace biphoton {

// All quantities in SI: times in seconds, |phi|^2 in s^-2, rates in s^-1.

// Gaussian-shaped squared waveform: A * exp(-(tau-center)^2 / (2 sigma^2)).
struct GaussianLike {
    double amplitude = 0.0;  // s^-2
    double center = 0.0;     // s
    double sigma = 0.0;      // s
};

// Rectangular main body with an additive exponential spike on its
// leading edge: body B on [start, start+length), spike S*exp(-(tau-start)/decay)
// for tau >= start.
struct RectPrecursor {
    double body_amplitude = 0.0;   // s^-2
    double body_start = 0.0;       // s
    double body_length = 0.0;      // s
    double spike_amplitude = 0.0;  // s^-2
    double spike_decay = 0.0;      // s
};

// Piecewise-linear interpolation of (time, value) samples; zero outside
// the tabulated range.
struct Tabulated {
    std::vector<double> times;   // s, strictly increasing
    std::vector<double> values;  // s^-2, non-negative
};

using WaveformModel = std::variant<GaussianLike, RectPrecursor, Tabulated>;

inline void validate(const WaveformModel& model) {
    struct Checker {
        void operator()(const GaussianLike& g) const {
            if (g.amplitude < 0.0) throw std::invalid_argument("waveform: amplitude must be >= 0");
            if (!(g.sigma > 0.0)) throw std::invalid_argument("waveform: sigma must be > 0");
        }
        void operator()(const RectPrecursor& r) const {
            if (r.body_amplitude < 0.0 || r.spike_amplitude < 0.0)
                throw std::invalid_argument("waveform: amplitude must be >= 0");
            if (!(r.body_length > 0.0)) throw std::invalid_argument("waveform: body length must be > 0");
            if (!(r.spike_decay > 0.0)) throw std::invalid_argument("waveform: spike decay must be > 0");
        }
        void operator()(const Tabulated& t) const {
            if (t.times.size() != t.values.size() || t.times.size() < 2)
                throw std::invalid_argument("waveform: tabulated samples need >= 2 matched points");
            for (std::size_t i = 1; i < t.times.size(); ++i)
                if (!(t.times[i] > t.times[i - 1]))
                    throw std::invalid_argument("waveform: tabulated times must be strictly increasing");
            for (double v : t.values)
                if (v < 0.0) throw std::invalid_argument("waveform: tabulated values must be >= 0");
        }
    };
    std::visit(Checker{}, model);
}

// |phi(tau)|^2. Causal: identically zero for tau < 0.
inline double phi_squared(const WaveformModel& model, double tau) {
    if (tau < 0.0) return 0.0;
    struct Eval {
        double tau;
        double operator()(const GaussianLike& g) const {
            const double z = (tau - g.center) / g.sigma;
            return g.amplitude * std::exp(-0.5 * z * z);
        }
        double operator()(const RectPrecursor& r) const {
            double v = 0.0;
            if (tau >= r.body_start && tau < r.body_start + r.body_length)
                v += r.body_amplitude;
            if (tau >= r.body_start)
                v += r.spike_amplitude * std::exp(-(tau - r.body_start) / r.spike_decay);
            return v;
        }
        double operator()(const Tabulated& t) const {
            if (tau < t.times.front() || tau > t.times.back()) return 0.0;
            auto it = std::upper_bound(t.times.begin(), t.times.end(), tau);
            if (it == t.times.begin()) return t.values.front();
            if (it == t.times.end()) return t.values.back();
            const std::size_t i = static_cast<std::size_t>(it - t.times.begin());
            const double w = (tau - t.times[i - 1]) / (t.times[i] - t.times[i - 1]);
            return t.values[i - 1] * (1.0 - w) + t.values[i] * w;
        }
    };
    return std::visit(Eval{tau}, model);
}

// Pair source: waveform shape, generated pair rate, and the support
// window [0, t_max] that contains the whole waveform.
struct BiphotonSpec {
    WaveformModel waveform;
    double pair_rate = 0.0;  // R, s^-1
    double t_max = 0.0;      // s
};

inline void validate(const BiphotonSpec& spec) {
    validate(spec.waveform);
    if (spec.pair_rate < 0.0) throw std::invalid_argument("source: pair rate must be >= 0");
    if (!(spec.t_max > 0.0)) throw std::invalid_argument("source: t_max must be > 0");
}

// Unmodulated Glauber correlation: |phi(tau)|^2 plus the accidental
// floor R^2, applied inside [0, t_max].
inline double g2_zero(const BiphotonSpec& spec, double tau) {
    if (tau < 0.0 || tau > spec.t_max) return 0.0;
    return phi_squared(spec.waveform, tau) + spec.pair_rate * spec.pair_rate;
}

// Integral of G2_0 over [0, t_max].
inline double integral_g2(const BiphotonSpec& spec, std::size_t n0 = 4096) {
    return simpson_refine([&](double t) { return g2_zero(spec, t); },
                          0.0, spec.t_max, n0, 0.0, 1e-9);
}

// Inverse-CDF sampler for the relative arrival time tau, with density
// G2_0(tau) / integral. Grid: 2^14 uniform tau points, linear interpolation.
class TauSampler {
public:
    static constexpr std::size_t kGridSize = 1u << 14;

    explicit TauSampler(const BiphotonSpec& spec) : t_max_(spec.t_max) {
        cdf_.resize(kGridSize + 1);
        std::vector<double> pdf(kGridSize + 1);
        const double h = t_max_ / static_cast<double>(kGridSize);
        for (std::size_t i = 0; i <= kGridSize; ++i)
            pdf[i] = g2_zero(spec, h * static_cast<double>(i));
        cdf_[0] = 0.0;
        for (std::size_t i = 1; i <= kGridSize; ++i)
            cdf_[i] = cdf_[i - 1] + 0.5 * (pdf[i - 1] + pdf[i]) * h;
        const double total = cdf_.back();
        if (!(total > 0.0)) throw std::invalid_argument("empty distribution");
        for (double& c : cdf_) c /= total;
    }

    double sample(SplitMix64& rng) const {
        const double u = rng.uniform();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.begin()) return 0.0;
        if (it == cdf_.end()) return t_max_;
        const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
        const double h = t_max_ / static_cast<double>(kGridSize);
        const double lo = cdf_[i - 1], hi = cdf_[i];
        const double w = (hi > lo) ? (u - lo) / (hi - lo) : 0.0;
        return h * (static_cast<double>(i - 1) + w);
    }

private:
    double t_max_;
    std::vector<double> cdf_;
};

inline double sample_tau(const BiphotonSpec& spec, SplitMix64& rng) {
    return TauSampler(spec).sample(rng);
}

}  // namespace biphoton

#endif
