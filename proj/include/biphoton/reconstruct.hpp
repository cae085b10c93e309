#ifndef BIPHOTON_RECONSTRUCT_HPP
#define BIPHOTON_RECONSTRUCT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "biphoton/detection.hpp"
#include "biphoton/quadrature.hpp"
#include "biphoton/waveform.hpp"

namespace biphoton {

// Forward cosine transform of G2_0 at applied frequency f:
// sqrt(2/pi) * integral_0^{t_max} G2_0(tau) cos(2 * 2*pi*f * tau) dtau.
// Serves as the noise-free oracle for what a sweep measures.
inline double forward_transform(const BiphotonSpec& spec, double f) {
    const double two_omega = 2.0 * 2.0 * std::numbers::pi * f;
    const auto integrand = [&](double tau) {
        return g2_zero(spec, tau) * std::cos(two_omega * tau);
    };
    // Resolve the oscillation: >= 32 intervals per cosine period.
    const double cycles = two_omega * spec.t_max / (2.0 * std::numbers::pi);
    const std::size_t n0 = std::max<std::size_t>(
        4096, static_cast<std::size_t>(32.0 * std::ceil(std::abs(cycles))));
    const double value = simpson_refine(integrand, 0.0, spec.t_max, n0, 0.0, 1e-10);
    return std::sqrt(2.0 / std::numbers::pi) * value;
}

enum class DcStrategy { TailMean, GlobalMean };

// Subtracts the DC estimate from every trace point. "tail-mean" averages
// the top 20% of frequencies, where the waveform's spectrum has died out.
inline FrequencyTrace remove_dc(const FrequencyTrace& trace,
                                DcStrategy strategy = DcStrategy::TailMean) {
    if (trace.counts.size() < 10)
        throw std::invalid_argument("remove_dc: need at least 10 trace points");
    double dc = 0.0;
    if (strategy == DcStrategy::GlobalMean) {
        for (double c : trace.counts) dc += c;
        dc /= static_cast<double>(trace.counts.size());
    } else {
        const std::size_t n_tail = std::max<std::size_t>(1, trace.counts.size() / 5);
        for (std::size_t i = trace.counts.size() - n_tail; i < trace.counts.size(); ++i)
            dc += trace.counts[i];
        dc /= static_cast<double>(n_tail);
    }
    FrequencyTrace out = trace;
    for (double& c : out.counts) c -= dc;
    return out;
}

struct Reconstruction {
    std::vector<double> tau;     // s, uniform grid from 0
    std::vector<double> values;  // arbitrary units
    double scale = 1.0;          // applied one-point scale factor
    double dc_estimate = 0.0;
    std::string source;          // where the data came from (trace id / file)
};

// Inverse cosine transform onto a tau grid: trapezoidal sum over the
// uniform frequency grid, observed frequency 2*f_k per applied f_k.
inline Reconstruction cosine_transform(const FrequencyTrace& trace,
                                       const std::vector<double>& tau_grid) {
    const auto& f = trace.frequencies;
    if (f.size() < 2) throw std::invalid_argument("cosine_transform: need >= 2 trace points");
    const double df = f[1] - f[0];
    for (std::size_t k = 1; k < f.size(); ++k)
        if (std::abs((f[k] - f[k - 1]) - df) > 1e-9 * df)
            throw std::invalid_argument("uniform grid required");

    Reconstruction rec;
    rec.tau = tau_grid;
    rec.values.assign(tau_grid.size(), 0.0);
    const double d_omega = 2.0 * std::numbers::pi * df;
    for (std::size_t j = 0; j < tau_grid.size(); ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            const double w = (k == 0 || k + 1 == f.size()) ? 0.5 : 1.0;
            sum += w * trace.counts[k] *
                   std::cos(2.0 * 2.0 * std::numbers::pi * f[k] * tau_grid[j]);
        }
        rec.values[j] = sum * d_omega;
    }
    return rec;
}

// Vertical scale so the reconstruction matches the reference histogram
// at the reference's peak bin.
inline Reconstruction one_point_scale(const Reconstruction& rec, const Histogram& reference) {
    if (rec.tau.empty() || reference.counts.empty())
        throw std::invalid_argument("one_point_scale: empty input");
    const auto peak_it = std::max_element(reference.counts.begin(), reference.counts.end());
    const double peak_tau =
        reference.bin_center(static_cast<std::size_t>(peak_it - reference.counts.begin()));
    if (peak_tau < rec.tau.front() || peak_tau > rec.tau.back())
        throw std::invalid_argument("one_point_scale: no overlapping tau support");
    // Nearest reconstruction point to the reference peak.
    std::size_t j_best = 0;
    for (std::size_t j = 1; j < rec.tau.size(); ++j)
        if (std::abs(rec.tau[j] - peak_tau) < std::abs(rec.tau[j_best] - peak_tau)) j_best = j;
    const double value = rec.values[j_best];
    if (value <= 0.0) throw std::invalid_argument("unusable scale point");
    Reconstruction out = rec;
    const double s = static_cast<double>(*peak_it) / value;
    for (double& v : out.values) v *= s;
    out.scale = rec.scale * s;
    return out;
}

struct CompareMetrics {
    double nrmse = 0.0;          // RMS of difference / peak of direct histogram
    double peak_shift = 0.0;     // s, recon peak location minus direct peak location
    double fwhm_diff = 0.0;      // s, recon FWHM minus direct FWHM
    std::size_t n_points = 0;    // points entering the NRMSE
};

namespace internal {

// FWHM of a sampled curve by linear interpolation of the half-max crossings.
inline double fwhm(const std::vector<double>& x, const std::vector<double>& y) {
    const auto peak_it = std::max_element(y.begin(), y.end());
    const double half = 0.5 * *peak_it;
    const std::size_t p = static_cast<std::size_t>(peak_it - y.begin());
    double left = x.front(), right = x.back();
    for (std::size_t i = p; i-- > 0;) {
        if (y[i] < half) {
            const double w = (half - y[i]) / (y[i + 1] - y[i]);
            left = x[i] + w * (x[i + 1] - x[i]);
            break;
        }
    }
    for (std::size_t i = p + 1; i < y.size(); ++i) {
        if (y[i] < half) {
            const double w = (y[i - 1] - half) / (y[i - 1] - y[i]);
            right = x[i - 1] + w * (x[i] - x[i - 1]);
            break;
        }
    }
    return right - left;
}

}  // namespace internal

// Compares a reconstruction against a directly histogrammed reference,
// rebinned onto the reconstruction grid by nearest bin. Tau points
// within dc_guard of zero are excluded from the NRMSE (the retained DC
// component spikes there).
inline CompareMetrics compare(const Reconstruction& rec, const Histogram& direct,
                              double dc_guard = 20e-9) {
    if (rec.tau.empty() || direct.counts.empty())
        throw std::invalid_argument("compare: empty input");

    std::vector<double> tau_common, rec_vals, dir_vals;
    for (std::size_t j = 0; j < rec.tau.size(); ++j) {
        const double t = rec.tau[j];
        const double pos = (t - direct.origin) / direct.bin_width;
        if (pos < 0.0 || pos >= static_cast<double>(direct.counts.size())) continue;
        tau_common.push_back(t);
        rec_vals.push_back(rec.values[j]);
        dir_vals.push_back(static_cast<double>(direct.counts[static_cast<std::size_t>(pos)]));
    }
    if (tau_common.empty()) throw std::invalid_argument("compare: no overlapping tau range");

    const double dir_peak = *std::max_element(dir_vals.begin(), dir_vals.end());
    if (!(dir_peak > 0.0)) throw std::invalid_argument("compare: reference histogram is empty");

    CompareMetrics m;
    double sq = 0.0;
    for (std::size_t i = 0; i < tau_common.size(); ++i) {
        if (std::abs(tau_common[i]) < dc_guard) continue;
        const double d = rec_vals[i] - dir_vals[i];
        sq += d * d;
        ++m.n_points;
    }
    if (m.n_points == 0) throw std::invalid_argument("compare: no points outside DC guard");
    m.nrmse = std::sqrt(sq / static_cast<double>(m.n_points)) / dir_peak;

    // Peak locations, also skipping the DC guard zone. The raw argmax of a
    // counting histogram jitters across a flat top, so each peak is the
    // value-weighted centroid of the points above half maximum.
    const auto robust_peak = [&](const std::vector<double>& vals) {
        double top = 0.0;
        for (std::size_t i = 0; i < tau_common.size(); ++i)
            if (std::abs(tau_common[i]) >= dc_guard) top = std::max(top, vals[i]);
        double w_sum = 0.0, t_sum = 0.0;
        for (std::size_t i = 0; i < tau_common.size(); ++i) {
            if (std::abs(tau_common[i]) < dc_guard) continue;
            if (vals[i] < 0.5 * top) continue;
            w_sum += vals[i];
            t_sum += vals[i] * tau_common[i];
        }
        if (!(w_sum > 0.0)) {  // no positive values: fall back to the argmax
            std::size_t best = 0;
            bool first = true;
            for (std::size_t i = 0; i < tau_common.size(); ++i) {
                if (std::abs(tau_common[i]) < dc_guard) continue;
                if (first || vals[i] > vals[best]) best = i;
                first = false;
            }
            return tau_common[best];
        }
        return t_sum / w_sum;
    };
    m.peak_shift = robust_peak(rec_vals) - robust_peak(dir_vals);
    m.fwhm_diff = internal::fwhm(tau_common, rec_vals) - internal::fwhm(tau_common, dir_vals);
    return m;
}

}  // namespace biphoton

#endif
