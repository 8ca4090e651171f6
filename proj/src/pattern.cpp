#include "ghost/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghost {

void validate(const Pattern& pattern) {
    if (pattern.positions.size() != pattern.rates.size())
        throw std::invalid_argument("pattern: positions/rates size mismatch");
    if (pattern.positions.size() < 2)
        throw std::invalid_argument("pattern: need at least two samples");
    const double step = pattern.positions[1] - pattern.positions[0];
    if (!(step > 0.0))
        throw std::invalid_argument("pattern: positions must be increasing");
    for (std::size_t i = 1; i < pattern.positions.size(); ++i) {
        const double d = pattern.positions[i] - pattern.positions[i - 1];
        if (std::abs(d - step) > 1e-9 * std::abs(step))
            throw std::invalid_argument("pattern: positions must be uniformly spaced");
    }
    for (double r : pattern.rates)
        if (!(r >= 0.0))
            throw std::invalid_argument("pattern: rates must be nonnegative");
}

void normalize_peak(Pattern& pattern) {
    const double peak = *std::max_element(pattern.rates.begin(), pattern.rates.end());
    if (peak > 0.0)
        for (double& r : pattern.rates)
            r /= peak;
}

double pattern_spacing(const Pattern& pattern) {
    if (pattern.positions.size() < 2)
        throw std::invalid_argument("pattern_spacing: need at least two samples");
    return pattern.positions[1] - pattern.positions[0];
}

Pattern clip_window(const Pattern& pattern, double half_width, double center) {
    if (!(half_width > 0.0))
        throw std::invalid_argument("clip_window: half width must be positive");
    Pattern out;
    out.label = pattern.label;
    for (std::size_t i = 0; i < pattern.positions.size(); ++i) {
        if (std::abs(pattern.positions[i] - center) <= half_width) {
            out.positions.push_back(pattern.positions[i]);
            out.rates.push_back(pattern.rates[i]);
        }
    }
    if (out.positions.size() < 2)
        throw std::invalid_argument("clip_window: window contains fewer than two samples");
    return out;
}

Pattern smear_pattern(const Pattern& pattern, double kernel_sigma) {
    validate(pattern);
    if (std::isnan(kernel_sigma) || kernel_sigma < 0.0)
        throw std::invalid_argument("smear_pattern: sigma must be >= 0");
    if (kernel_sigma == 0.0)
        return pattern;

    const double step = pattern_spacing(pattern);
    const int half = static_cast<int>(std::ceil(8.0 * kernel_sigma / step));
    std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
    double sum = 0.0;
    for (int j = -half; j <= half; ++j) {
        const double u = j * step / kernel_sigma;
        const double w = std::exp(-0.5 * u * u);
        kernel[static_cast<std::size_t>(j + half)] = w;
        sum += w;
    }
    for (double& w : kernel)
        w /= sum;

    Pattern out = pattern;
    const auto n = static_cast<std::ptrdiff_t>(pattern.rates.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) {
            const std::ptrdiff_t src = i - j;
            if (src >= 0 && src < n)
                acc += kernel[static_cast<std::size_t>(j + half)] *
                       pattern.rates[static_cast<std::size_t>(src)];
        }
        out.rates[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

} // namespace ghost
