#pragma once

#include <complex>
#include <vector>

#include "ghost/grid.hpp"

namespace ghost {

/// Scalar complex field sampled on a transverse grid, with the optical
/// wavelength it propagates at. One value per grid sample.
struct ComplexField {
    TransverseGrid grid;
    std::vector<std::complex<double>> values;
    double wavelength = 0.0; ///< meters

    double wavenumber() const; ///< 2*pi / wavelength
    /// Total power: sum |v|^2 * spacing (discrete integral of intensity).
    double power() const;
};

/// Validated factory; values start at zero.
ComplexField make_field(const TransverseGrid& grid, double wavelength);

} // namespace ghost
