#pragma once

#include "ghost/field.hpp"

namespace ghost {

/// Paraxial free-space propagation over distance z >= 0 via the angular
/// spectrum: each plane-wave component q picks up exp(-i q^2 z / (2k)).
/// The kernel has unit modulus, so total power is conserved to FFT
/// roundoff. z == 0 returns the input bitwise unchanged; z < 0 throws
/// std::invalid_argument (this model only runs waves forward).
ComplexField fresnel_propagate(const ComplexField& field, double distance_z);

/// Ideal thin lens: pointwise phase exp(-i k x^2 / (2f)). |value| is
/// unchanged sample by sample. focal_length may be negative (diverging)
/// but not zero.
ComplexField thin_lens(const ComplexField& field, double focal_length);

/// Back-focal-plane mapping of a thin lens: a plane wave with transverse
/// wavenumber k_t focuses to x = f * k_t * wavelength / (2*pi).
double focal_plane_coordinate(double k_transverse, double focal_length, double wavelength);

} // namespace ghost
