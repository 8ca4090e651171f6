#include "ghost/apertures.hpp"

#include <cmath>
#include <stdexcept>

namespace ghost {

void validate(const DoubleSlitSpec& spec) {
    if (!(spec.slit_width_a > 0.0))
        throw std::invalid_argument("double slit: slit width must be positive");
    if (!(spec.slit_width_a < spec.slit_separation_d))
        throw std::invalid_argument(
            "double slit: slit width must be smaller than the center separation "
            "(otherwise the openings overlap)");
}

std::vector<double> double_slit_mask(const TransverseGrid& grid, const DoubleSlitSpec& spec) {
    validate(spec);
    const double outer_edge = spec.slit_separation_d / 2 + spec.slit_width_a / 2;
    const double lo = grid.position(0);
    const double hi = grid.position(grid.n - 1);
    if (-outer_edge < lo || outer_edge > hi)
        throw std::invalid_argument("double_slit_mask: grid does not contain both slits");

    std::vector<double> mask(static_cast<std::size_t>(grid.n), 0.0);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.position(i);
        const bool open = std::abs(std::abs(x) - spec.slit_separation_d / 2) <=
                          spec.slit_width_a / 2;
        mask[static_cast<std::size_t>(i)] = open ? 1.0 : 0.0;
    }
    return mask;
}

std::vector<double> single_slit_mask(const TransverseGrid& grid, double width, double center) {
    if (!(width > 0.0))
        throw std::invalid_argument("single_slit_mask: width must be positive");
    std::vector<double> mask(static_cast<std::size_t>(grid.n), 0.0);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.position(i);
        mask[static_cast<std::size_t>(i)] = (std::abs(x - center) <= width / 2) ? 1.0 : 0.0;
    }
    return mask;
}

} // namespace ghost
