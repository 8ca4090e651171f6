#pragma once

#include <vector>

namespace ghost {

/// Uniform 1D transverse coordinate grid. Sample i sits at
/// center + (i - n/2) * spacing, so the grid is slightly asymmetric
/// (one more sample below center than above), matching FFT conventions.
struct TransverseGrid {
    int n = 0;            ///< sample count
    double spacing = 0.0; ///< meters between samples
    double center = 0.0;  ///< meters

    double position(int i) const { return center + (i - n / 2) * spacing; }
    double extent() const { return n * spacing; }
    std::vector<double> positions() const;
};

/// Validated factory: n >= 16 and extent > 0, else std::invalid_argument.
/// Power-of-two n is recommended but not required.
TransverseGrid make_grid(int n, double extent, double center = 0.0);

} // namespace ghost
