#include <doctest.h>

#include <cmath>
#include <vector>

#include "biphoton/montecarlo.hpp"
#include "biphoton/quadrature.hpp"
#include "test_util.hpp"

using namespace biphoton;

namespace {

SimConfig base_config() {
    SimConfig cfg;
    cfg.seed = 99;
    cfg.duration = 80.0;
    cfg.efficiency = 1.0;
    cfg.idler_delay = 0.0;
    cfg.source = {GaussianLike{1e12, 300e-9, 80e-9}, 325.0, 1e-6};
    cfg.modulators = {Open{}, Open{}};
    return cfg;
}

}  // namespace

TEST_CASE("pair count is Poisson(R * T_run)") {
    SimConfig cfg = base_config();
    SplitMix64 rng(cfg.seed);
    const auto pairs = generate_pairs(cfg, rng);
    const double mean = 325.0 * 80.0;  // 26 000
    CHECK(std::abs(static_cast<double>(pairs.size()) - mean) < 3.0 * std::sqrt(mean));
    for (const auto& p : pairs) {
        CHECK(p.t >= 0.0);
        CHECK(p.t < cfg.duration);
        CHECK(p.tau >= 0.0);
        CHECK(p.tau <= cfg.source.t_max);
    }
}

TEST_CASE("zero rate gives an empty stream") {
    SimConfig cfg = base_config();
    cfg.source.pair_rate = 0.0;
    SplitMix64 rng(1);
    CHECK(generate_pairs(cfg, rng).empty());
}

TEST_CASE("identical seed and config reproduce the stream exactly") {
    const SimConfig cfg = base_config();
    const auto a = simulate_events(cfg, 0);
    const auto b = simulate_events(cfg, 0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].t_signal == b[i].t_signal);
        CHECK(a[i].t_idler == b[i].t_idler);
    }
    // A different stream index decorrelates the run.
    const auto c = simulate_events(cfg, 1);
    CHECK((c.size() != a.size() || c.empty() || c[0].t_signal != a[0].t_signal));
}

TEST_CASE("open modulators at unit efficiency keep every pair") {
    SimConfig cfg = base_config();
    SplitMix64 rng(cfg.seed);
    const auto pairs = generate_pairs(cfg, rng);
    const auto events = thin_and_detect(pairs, cfg, rng);
    CHECK(events.size() == pairs.size());
}

TEST_CASE("one modulated channel thins to one half") {
    SimConfig cfg = base_config();
    cfg.source.pair_rate = 12500.0;  // ~1e6 pairs over 80 s
    cfg.modulators = {Open{}, Sinusoid{35e6, 0.4}};
    SplitMix64 rng(7);
    const auto pairs = generate_pairs(cfg, rng);
    const auto events = thin_and_detect(pairs, cfg, rng);
    const double fraction =
        static_cast<double>(events.size()) / static_cast<double>(pairs.size());
    const double sigma = std::sqrt(0.25 / static_cast<double>(pairs.size()));
    CHECK(std::abs(fraction - 0.5) < 3.0 * sigma);
}

TEST_CASE("matched sinusoids thin by the M-weighted waveform integral") {
    SimConfig cfg = base_config();
    cfg.source.pair_rate = 12500.0;
    cfg.modulators = {Sinusoid{35e6, 0.0}, Sinusoid{35e6, 0.0}};
    SplitMix64 rng(21);
    const auto pairs = generate_pairs(cfg, rng);
    const auto events = thin_and_detect(pairs, cfg, rng);

    // Oracle: quadrature of M(tau) against the pair-delay density.
    const double num = simpson_refine(
        [&](double t) {
            return modulator_correlation_analytic(cfg.modulators, t) *
                   g2_zero(cfg.source, t);
        },
        0.0, cfg.source.t_max, 8192, 0.0, 1e-9);
    const double expected = num / integral_g2(cfg.source);
    const double fraction =
        static_cast<double>(events.size()) / static_cast<double>(pairs.size());
    const double sigma =
        std::sqrt(expected * (1.0 - expected) / static_cast<double>(pairs.size()));
    CHECK(std::abs(fraction - expected) < 3.0 * sigma);
}

TEST_CASE("expected coincidence rate formula") {
    SimConfig cfg = base_config();
    cfg.efficiency = 0.5;
    cfg.source = {GaussianLike{0.0, 0.0, 1e-9}, 0.0, 1e-6};
    // Pin G2_0 = 4e5 via a tabulated flat waveform.
    cfg.source.waveform = Tabulated{{0.0, 1e-6}, {4e5, 4e5}};
    CHECK(expected_coincidence_rate(cfg, 500e-9, 1e-9) == doctest::Approx(1e-4).epsilon(1e-9));

    SimConfig unit = base_config();
    const double tau = 310e-9;
    CHECK(expected_coincidence_rate(unit, tau, 1e-9) ==
          doctest::Approx(g2_zero(unit.source, tau) * 1e-9).epsilon(1e-9));
}

TEST_CASE("emitted delays stay within [D, D + T_max]") {
    SimConfig cfg = base_config();
    cfg.idler_delay = 175e-9;
    cfg.modulators = {Sinusoid{20e6, 0.0}, Sinusoid{20e6, 0.0}};
    const auto events = simulate_events(cfg, 0);
    REQUIRE(!events.empty());
    for (const auto& e : events) {
        CHECK(e.delta() >= cfg.idler_delay);
        CHECK(e.delta() <= cfg.idler_delay + cfg.source.t_max);
    }
}

TEST_CASE("emitted delay histogram follows M * G2_0 (chi2)") {
    SimConfig cfg = base_config();
    cfg.source.pair_rate = 12500.0;  // ~1e6 pairs
    cfg.modulators = {Sinusoid{10e6, 0.0}, Sinusoid{10e6, 0.0}};
    const auto events = simulate_events(cfg, 5);

    const double bin = 2e-9;
    std::vector<double> counts(500, 0.0);
    for (const auto& e : events) {
        const auto idx = static_cast<std::size_t>(e.delta() / bin);
        if (idx < counts.size()) counts[idx] += 1.0;
    }
    // Scale prediction by the realized survivor total so only the shape
    // is under test.
    double norm = 0.0;
    std::vector<double> shape(counts.size());
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const double center = (static_cast<double>(i) + 0.5) * bin;
        shape[i] = modulator_correlation_analytic(cfg.modulators, center) *
                   g2_zero(cfg.source, center);
        norm += shape[i];
    }
    double total = 0.0;
    for (double c : counts) total += c;
    std::vector<double> expected(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i)
        expected[i] = total * shape[i] / norm;
    const double chi2 = testutil::chi2_per_dof(counts, expected);
    CHECK(chi2 > 0.8);
    CHECK(chi2 < 1.2);
}

TEST_CASE("two merged half runs look like one full run (KS)") {
    SimConfig full = base_config();
    full.source.pair_rate = 2500.0;
    const auto full_events = simulate_events(full, 0);

    SimConfig half = full;
    half.duration = full.duration / 2.0;
    auto merged = simulate_events(half, 1);
    const auto second = simulate_events(half, 2);
    merged.insert(merged.end(), second.begin(), second.end());

    std::vector<double> deltas_full, deltas_merged;
    for (const auto& e : full_events) deltas_full.push_back(e.delta());
    for (const auto& e : merged) deltas_merged.push_back(e.delta());
    CHECK(testutil::ks_two_sample_pvalue(deltas_full, deltas_merged) > 0.01);
}
