#include "ghost/propagation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ghost/fft.hpp"

namespace ghost {

ComplexField fresnel_propagate(const ComplexField& field, double distance_z) {
    if (std::isnan(distance_z) || distance_z < 0.0)
        throw std::invalid_argument("fresnel_propagate: distance must be >= 0");
    if (!(field.wavelength > 0.0))
        throw std::invalid_argument("fresnel_propagate: field has no wavelength");
    if (distance_z == 0.0)
        return field;

    ComplexField out = field;
    fft_forward(out.values);
    const double k = field.wavenumber();
    const int n = field.grid.n;
    for (int j = 0; j < n; ++j) {
        const double q = fft_angular_frequency(j, n, field.grid.spacing);
        const double phase = -q * q * distance_z / (2.0 * k);
        out.values[static_cast<std::size_t>(j)] *=
            std::complex<double>(std::cos(phase), std::sin(phase));
    }
    fft_inverse(out.values);
    return out;
}

ComplexField thin_lens(const ComplexField& field, double focal_length) {
    if (focal_length == 0.0 || std::isnan(focal_length))
        throw std::invalid_argument("thin_lens: focal length must be nonzero");
    ComplexField out = field;
    const double k = field.wavenumber();
    for (int i = 0; i < field.grid.n; ++i) {
        const double x = field.grid.position(i);
        const double phase = -k * x * x / (2.0 * focal_length);
        out.values[static_cast<std::size_t>(i)] *=
            std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return out;
}

double focal_plane_coordinate(double k_transverse, double focal_length, double wavelength) {
    if (focal_length == 0.0)
        throw std::invalid_argument("focal_plane_coordinate: focal length must be nonzero");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("focal_plane_coordinate: wavelength must be positive");
    return focal_length * k_transverse * wavelength / (2.0 * std::numbers::pi);
}

} // namespace ghost
