#pragma once

#include <cstdint>

namespace ghost {

/// Small splittable PRNG (splitmix64). Every stochastic routine in the
/// library derives one independent stream per (master seed, item index),
/// so results never depend on evaluation order or thread count.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1]; never returns 0 so log() is safe.
    double uniform() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Deterministic per-item seed derivation: hash of (master, index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Standard normal deviate (Box-Muller; consumes exactly two uniforms).
double normal_deviate(SplitMix64& rng);

/// Exact Poisson deviate. Inversion for small means, transformed
/// rejection (PTRS) for large ones; identical output for identical seeds
/// on every platform, unlike std::poisson_distribution.
std::int64_t poisson_deviate(SplitMix64& rng, double mean);

} // namespace ghost
