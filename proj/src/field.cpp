#include "ghost/field.hpp"

#include <numbers>
#include <stdexcept>

namespace ghost {

double ComplexField::wavenumber() const {
    return 2.0 * std::numbers::pi / wavelength;
}

double ComplexField::power() const {
    double acc = 0.0;
    for (const auto& v : values)
        acc += std::norm(v);
    return acc * grid.spacing;
}

ComplexField make_field(const TransverseGrid& grid, double wavelength) {
    if (!(wavelength > 0.0))
        throw std::invalid_argument("make_field: wavelength must be positive");
    if (grid.n < 16 || !(grid.spacing > 0.0))
        throw std::invalid_argument("make_field: invalid grid");
    ComplexField f;
    f.grid = grid;
    f.values.assign(static_cast<std::size_t>(grid.n), {0.0, 0.0});
    f.wavelength = wavelength;
    return f;
}

} // namespace ghost
