#include "ghost/grid.hpp"

#include <stdexcept>

namespace ghost {

std::vector<double> TransverseGrid::positions() const {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = position(i);
    return xs;
}

TransverseGrid make_grid(int n, double extent, double center) {
    if (n < 16)
        throw std::invalid_argument("make_grid: need at least 16 samples");
    if (!(extent > 0.0))
        throw std::invalid_argument("make_grid: extent must be positive");
    return TransverseGrid{n, extent / n, center};
}

} // namespace ghost
