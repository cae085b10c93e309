#ifndef BIPHOTON_MODULATOR_HPP
#define BIPHOTON_MODULATOR_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "biphoton/quadrature.hpp"
#include "biphoton/waveform.hpp"

namespace biphoton {

// Periodic intensity-transmission models. The field transmission m(t)
// only ever enters through |m(t)|^2, so intensity is modeled directly.

struct Open {};  // transmission = 1

struct Sinusoid {
    double frequency = 0.0;  // Hz (applied drive frequency)
    double phase = 0.0;      // rad; intensity cos^2(2*pi*f*t + phase)
};

struct Square {
    double frequency = 0.0;  // Hz
    double phase = 0.0;      // rad
    double duty = 0.5;       // open fraction of the period, in (0,1)
};

struct TabulatedPeriodic {
    double period = 0.0;          // s
    std::vector<double> values;   // intensity samples in [0,1], one period
};

using ModulatorWaveform = std::variant<Open, Sinusoid, Square, TabulatedPeriodic>;

inline void validate(const ModulatorWaveform& mod) {
    struct Checker {
        void operator()(const Open&) const {}
        void operator()(const Sinusoid& s) const {
            if (!(s.frequency > 0.0)) throw std::invalid_argument("modulator: frequency must be > 0");
        }
        void operator()(const Square& s) const {
            if (!(s.frequency > 0.0)) throw std::invalid_argument("modulator: frequency must be > 0");
            if (!(s.duty > 0.0 && s.duty < 1.0))
                throw std::invalid_argument("modulator: duty must be in (0,1)");
        }
        void operator()(const TabulatedPeriodic& t) const {
            if (!(t.period > 0.0)) throw std::invalid_argument("modulator: period must be > 0");
            if (t.values.size() < 2)
                throw std::invalid_argument("modulator: tabulated period needs >= 2 samples");
            for (double v : t.values)
                if (v < 0.0 || v > 1.0)
                    throw std::invalid_argument("modulator: intensity must be in [0,1]");
        }
    };
    std::visit(Checker{}, mod);
}

// Intensity transmission |m(t)|^2 at time t, in [0,1].
inline double intensity_transmission(const ModulatorWaveform& mod, double t) {
    struct Eval {
        double t;
        double operator()(const Open&) const { return 1.0; }
        double operator()(const Sinusoid& s) const {
            const double c = std::cos(2.0 * std::numbers::pi * s.frequency * t + s.phase);
            return c * c;
        }
        double operator()(const Square& s) const {
            double x = s.frequency * t + s.phase / (2.0 * std::numbers::pi);
            x -= std::floor(x);
            return x < s.duty ? 1.0 : 0.0;
        }
        double operator()(const TabulatedPeriodic& tab) const {
            double x = t / tab.period;
            x -= std::floor(x);
            const double pos = x * static_cast<double>(tab.values.size());
            const std::size_t i = static_cast<std::size_t>(pos);
            const std::size_t j = (i + 1) % tab.values.size();
            const double w = pos - static_cast<double>(i);
            return tab.values[i] * (1.0 - w) + tab.values[j] * w;
        }
    };
    return std::visit(Eval{t}, mod);
}

// Intrinsic intensity period; nullopt for Open (constant, any period works).
inline std::optional<double> intensity_period(const ModulatorWaveform& mod) {
    struct Eval {
        std::optional<double> operator()(const Open&) const { return std::nullopt; }
        std::optional<double> operator()(const Sinusoid& s) const { return 1.0 / s.frequency; }
        std::optional<double> operator()(const Square& s) const { return 1.0 / s.frequency; }
        std::optional<double> operator()(const TabulatedPeriodic& t) const { return t.period; }
    };
    return std::visit(Eval{}, mod);
}

struct ModulatorPair {
    ModulatorWaveform m1;  // signal / Stokes channel
    ModulatorWaveform m2;  // idler / anti-Stokes channel
};

// Least common period of the two intensity waveforms. Two periods are
// commensurate when their ratio has a rational approximation p/q with
// relative error < 1e-12 and the common period stays below
// 1e4 * max(T1, T2). Throws "no common period" otherwise.
inline double common_period(const ModulatorPair& pair) {
    const auto t1 = intensity_period(pair.m1);
    const auto t2 = intensity_period(pair.m2);
    if (!t1 && !t2) return 1.0;  // both constant; any averaging window
    if (!t1) return *t2;
    if (!t2) return *t1;
    const double ratio = *t1 / *t2;
    const double limit = 1e4 * std::max(*t1, *t2);
    // Continued-fraction convergents of T1/T2.
    double x = ratio;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(x);
        const long long ai = static_cast<long long>(a);
        const long long p2 = ai * p1 + p0;
        const long long q2 = ai * q1 + q0;
        if (q2 > 0) {
            const double approx = static_cast<double>(p2) / static_cast<double>(q2);
            if (std::abs(approx - ratio) < 1e-12 * ratio) {
                // T = q * T1 = p * T2 with ratio = p/q
                const double period = static_cast<double>(q2) * *t1;
                if (period <= limit) return period;
                break;
            }
        }
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        const double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    throw std::invalid_argument("no common period");
}

// Modulator intensity correlation M(tau): period average of
// |m1(t)|^2 |m2(t+tau)|^2 over the common period. Composite Simpson,
// 4096 intervals per common period, doubled until converged to 1e-10.
inline double modulator_correlation(const ModulatorPair& pair, double tau) {
    const double period = common_period(pair);
    const auto integrand = [&](double t) {
        return intensity_transmission(pair.m1, t) *
               intensity_transmission(pair.m2, t + tau);
    };
    const double fastest = std::min(intensity_period(pair.m1).value_or(period),
                                    intensity_period(pair.m2).value_or(period));
    const std::size_t base = static_cast<std::size_t>(
        4096.0 * std::ceil(period / fastest));
    // Discontinuous intensities (square waves) never hit the tolerance;
    // capping the doublings bounds the cost at ~1e-5 relative error there.
    return simpson_refine(integrand, 0.0, period, base, 1e-10 * period, 0.0, 6) /
           period;
}

// Closed forms from the matched-sinusoid analysis:
//   (Open, Open)          -> 1
//   (Open, Sinusoid) or (Sinusoid, Open) -> 1/2
//   identical Sinusoids   -> 1/4 + 1/8 cos(2 * 2*pi*f * tau)
inline double modulator_correlation_analytic(const ModulatorPair& pair, double tau) {
    const bool open1 = std::holds_alternative<Open>(pair.m1);
    const bool open2 = std::holds_alternative<Open>(pair.m2);
    if (open1 && open2) return 1.0;
    const auto* s1 = std::get_if<Sinusoid>(&pair.m1);
    const auto* s2 = std::get_if<Sinusoid>(&pair.m2);
    if ((open1 && s2) || (open2 && s1)) return 0.5;
    if (s1 && s2 && s1->frequency == s2->frequency && s1->phase == s2->phase) {
        const double omega = 2.0 * std::numbers::pi * s1->frequency;
        return 0.25 + 0.125 * std::cos(2.0 * omega * tau);
    }
    throw std::invalid_argument("no closed form");
}

// Time-averaged modulated correlation: M(tau) * G2_0(tau).
inline double modulated_g2(const BiphotonSpec& spec, const ModulatorPair& pair, double tau) {
    return modulator_correlation(pair, tau) * g2_zero(spec, tau);
}

}  // namespace biphoton

#endif
