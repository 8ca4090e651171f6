#include "ghost/counts.hpp"

#include <numeric>
#include <stdexcept>

#include "ghost/rng.hpp"

namespace ghost {

CountsHistogram sample_counts(const Pattern& pattern, std::int64_t total_counts,
                              std::uint64_t seed) {
    validate(pattern);
    if (total_counts <= 0)
        throw std::invalid_argument("sample_counts: total_counts must be positive");
    const double rate_sum = std::accumulate(pattern.rates.begin(), pattern.rates.end(), 0.0);
    if (!(rate_sum > 0.0))
        throw std::invalid_argument("sample_counts: pattern has no rate anywhere");

    CountsHistogram h;
    h.positions = pattern.positions;
    h.counts.resize(pattern.rates.size());
    h.dwell = 1.0;
    h.seed = seed;
    const double scale = static_cast<double>(total_counts) / rate_sum;
    for (std::size_t i = 0; i < pattern.rates.size(); ++i) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        h.counts[i] = poisson_deviate(rng, scale * pattern.rates[i]);
    }
    return h;
}

} // namespace ghost
