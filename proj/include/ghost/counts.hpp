#pragma once

#include <cstdint>
#include <vector>

#include "ghost/pattern.hpp"

namespace ghost {

/// Poisson-sampled detector counts per scan position.
struct CountsHistogram {
    std::vector<double> positions;    ///< meters
    std::vector<std::int64_t> counts; ///< events per bin
    double dwell = 1.0;               ///< nominal dwell per bin, arbitrary units
    std::uint64_t seed = 0;           ///< master seed the sample was drawn with
};

/// Draws independent Poisson counts per bin with means proportional to the
/// pattern rates, scaled so the expected total equals total_counts. Each
/// bin uses its own RNG stream derived from (seed, bin index), so the
/// result is bit-exact for a given (pattern, total_counts, seed) and
/// independent of evaluation order. Throws std::invalid_argument for
/// total_counts <= 0 or an all-zero pattern.
CountsHistogram sample_counts(const Pattern& pattern, std::int64_t total_counts,
                              std::uint64_t seed);

} // namespace ghost
