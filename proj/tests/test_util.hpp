// Shared statistical helpers for the test suites. These are oracles and
// checks, deliberately independent of the library's implementation paths.

#ifndef BIPHOTON_TEST_UTIL_HPP
#define BIPHOTON_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace testutil {

// Reduced chi-square of observed counts against expected counts,
// skipping bins with expectation below min_expected.
inline double chi2_per_dof(const std::vector<double>& observed,
                           const std::vector<double>& expected,
                           double min_expected = 10.0) {
    double chi2 = 0.0;
    std::size_t dof = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] < min_expected) continue;
        const double d = observed[i] - expected[i];
        chi2 += d * d / expected[i];
        ++dof;
    }
    return dof > 1 ? chi2 / static_cast<double>(dof - 1) : 0.0;
}

// Two-histogram shape comparison: chi-square on normalized bin fractions
// with the standard two-sample variance estimate.
inline double chi2_per_dof_two_hist(const std::vector<std::uint64_t>& u,
                                    const std::vector<std::uint64_t>& v,
                                    double min_counts = 20.0) {
    double total_u = 0.0, total_v = 0.0;
    for (auto c : u) total_u += static_cast<double>(c);
    for (auto c : v) total_v += static_cast<double>(c);
    double chi2 = 0.0;
    std::size_t dof = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = static_cast<double>(u[i]);
        const double b = static_cast<double>(v[i]);
        if (a + b < min_counts) continue;
        const double diff = a / total_u - b / total_v;
        const double var = a / (total_u * total_u) + b / (total_v * total_v);
        chi2 += diff * diff / var;
        ++dof;
    }
    return dof > 1 ? chi2 / static_cast<double>(dof - 1) : 0.0;
}

// Asymptotic Kolmogorov distribution survival function.
inline double kolmogorov_pvalue(double d, double n_eff) {
    const double lambda = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
    double p = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = 2.0 * ((j % 2) ? 1.0 : -1.0) *
                            std::exp(-2.0 * lambda * lambda * j * j);
        p += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

// Two-sample Kolmogorov-Smirnov p-value. Sorts copies of the inputs.
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return kolmogorov_pvalue(d, na * nb / (na + nb));
}

// One-sample KS statistic against an analytic CDF.
template <typename Cdf>
inline double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double c = cdf(samples[i]);
        d = std::max(d, std::abs(c - static_cast<double>(i) / n));
        d = std::max(d, std::abs(c - static_cast<double>(i + 1) / n));
    }
    return d;
}

// Dominant oscillation frequency of a sampled curve by a dense scan of
// the DFT magnitude over [f_lo, f_hi]. x in seconds, result in Hz.
inline double dominant_frequency(const std::vector<double>& x, const std::vector<double>& y,
                                 double f_lo, double f_hi, double f_step) {
    double best_f = f_lo, best_mag = -1.0;
    for (double f = f_lo; f <= f_hi; f += f_step) {
        std::complex<double> sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            sum += y[i] * std::exp(std::complex<double>(
                              0.0, -2.0 * std::numbers::pi * f * x[i]));
        const double mag = std::abs(sum);
        if (mag > best_mag) {
            best_mag = mag;
            best_f = f;
        }
    }
    return best_f;
}

// Brute-force Riemann oracle for the modulator correlation: mean of
// i1(t) * i2(t + tau) over n uniformly spaced t in one period.
template <typename I1, typename I2>
inline double riemann_correlation(I1&& i1, I2&& i2, double period, double tau,
                                  std::size_t n = 1000000) {
    double sum = 0.0;
    const double h = period / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = (static_cast<double>(k) + 0.5) * h;
        sum += i1(t) * i2(t + tau);
    }
    return sum / static_cast<double>(n);
}

}  // namespace testutil

#endif
