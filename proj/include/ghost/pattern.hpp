#pragma once

#include <vector>

#include "ghost/grid.hpp"

namespace ghost {

/// Detector plane a pattern was computed for.
enum class DetectorPlane { focal, image };

/// Sampled coincidence (or singles) rate versus detector position.
/// Positions are strictly increasing and uniformly spaced; rates are
/// nonnegative and peak-normalized to 1 unless stated otherwise.
struct Pattern {
    std::vector<double> positions; ///< meters
    std::vector<double> rates;     ///< relative rate, peak = 1
    DetectorPlane label = DetectorPlane::focal;
};

/// Throws std::invalid_argument on size mismatch, short/empty data,
/// non-increasing or non-uniform positions, or negative rates.
void validate(const Pattern& pattern);

/// Scales rates so the maximum is exactly 1 (no-op on an all-zero pattern).
void normalize_peak(Pattern& pattern);

/// Grid spacing of the pattern's position axis.
double pattern_spacing(const Pattern& pattern);

/// Restriction of the pattern to |position - center| <= half_width.
Pattern clip_window(const Pattern& pattern, double half_width, double center = 0.0);

/// Convolution with a unit-area Gaussian of the given standard deviation.
/// kernel_sigma == 0 returns the input unchanged. The kernel is sampled on
/// the pattern grid, truncated at 8 sigma, and renormalized to unit sum,
/// so the discrete integral of the pattern is preserved (up to mass that
/// the convolution pushes past the pattern's ends).
Pattern smear_pattern(const Pattern& pattern, double kernel_sigma);

} // namespace ghost
