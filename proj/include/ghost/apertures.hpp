#pragma once

#include <vector>

#include "ghost/grid.hpp"

namespace ghost {

/// Symmetric double slit: two openings of width slit_width_a whose centers
/// sit slit_separation_d apart (at x = ±d/2). Requires 0 < a < d.
struct DoubleSlitSpec {
    double slit_width_a = 0.0;      ///< meters
    double slit_separation_d = 0.0; ///< meters
};

/// Throws std::invalid_argument unless 0 < a < d.
void validate(const DoubleSlitSpec& spec);

/// Binary transmission mask for the double slit, sampled on the grid.
/// A sample is open when it lies inside either slit; samples exactly on a
/// slit edge count as open. Throws std::invalid_argument if the grid does
/// not contain both slits.
std::vector<double> double_slit_mask(const TransverseGrid& grid, const DoubleSlitSpec& spec);

/// Binary mask for a single slit of the given width centered at `center`.
std::vector<double> single_slit_mask(const TransverseGrid& grid, double width,
                                     double center = 0.0);

} // namespace ghost
