#include "ghost/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ghost {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // One extra splitmix round decorrelates neighbouring indices.
    SplitMix64 mixer(master ^ (0x9e3779b97f4a7c15ull * (index + 1)));
    return mixer.next();
}

double normal_deviate(SplitMix64& rng) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

std::int64_t poisson_inversion(SplitMix64& rng, double mean) {
    // Knuth multiplication method, fine for mean < ~12.
    const double limit = std::exp(-mean);
    double prod = rng.uniform();
    std::int64_t k = 0;
    while (prod > limit) {
        prod *= rng.uniform();
        ++k;
    }
    return k;
}

// Hoermann's PTRS transformed-rejection sampler; exact for mean >= 10.
std::int64_t poisson_ptrs(SplitMix64& rng, double mean) {
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);

    for (;;) {
        double u = rng.uniform() - 0.5;
        double v = rng.uniform();
        double us = 0.5 - std::abs(u);
        double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::int64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(k);
    }
}

} // namespace

std::int64_t poisson_deviate(SplitMix64& rng, double mean) {
    if (!(mean >= 0.0))
        throw std::invalid_argument("poisson_deviate: mean must be >= 0");
    if (mean == 0.0)
        return 0;
    if (mean < 10.0)
        return poisson_inversion(rng, mean);
    return poisson_ptrs(rng, mean);
}

} // namespace ghost
