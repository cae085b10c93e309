#ifndef BIPHOTON_RNG_HPP
#define BIPHOTON_RNG_HPP

#include <cmath>
#include <cstdint>

namespace biphoton {

// Counter-based generator (splitmix64 finalizer over an incrementing
// counter). Streams are derived from (seed, stream) so that sweep points
// draw from independent, order-free sequences. Fully specified output,
// no implementation-defined std distributions involved.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~0ull; }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform double in [0, 1).
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [0, b).
    double uniform(double b) noexcept { return b * uniform(); }

    // Bernoulli trial with success probability p (clamped to [0,1]).
    bool bernoulli(double p) noexcept { return uniform() < p; }

    // Exact Poisson draw by Knuth's product-of-uniforms method, split
    // into chunks so exp(-lambda_chunk) stays well above double underflow.
    std::uint64_t poisson(double mean) noexcept {
        std::uint64_t total = 0;
        constexpr double chunk = 256.0;
        while (mean > chunk) {
            total += poisson_knuth(chunk);
            mean -= chunk;
        }
        return total + poisson_knuth(mean);
    }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t poisson_knuth(double mean) noexcept {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    std::uint64_t state_;
};

}  // namespace biphoton

#endif
