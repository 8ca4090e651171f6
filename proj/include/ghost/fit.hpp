#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ghost/biphoton.hpp"
#include "ghost/counts.hpp"
#include "ghost/pattern.hpp"

namespace ghost {

/// Interference model context: rate(x) = A * sinc^2(pi*(x-x0)*a/(lambda*f))
///                                     * (1 + V*cos(2*pi*(x-x0)*d/(lambda*f))) / 2
/// with parameters p = {A, V, a, d, x0}.
struct InterferenceModelContext {
    double wavelength = 0.0;
    double focal_length = 0.0;
};

/// Evaluates the interference model; if grad is non-null it receives
/// d(rate)/d(p_i) for the five parameters (analytic).
double interference_model(double x, const std::array<double, 5>& p,
                          const InterferenceModelContext& ctx,
                          std::array<double, 5>* grad = nullptr);

/// Image model context: two rectangles of width a_img centered at
/// +-d_img/2 convolved with a Gaussian of width p[1], scaled by p[0].
struct ImageModelContext {
    double a_img = 0.0;
    double d_img = 0.0;
};

/// Evaluates the image model with parameters p = {A, blur_sigma};
/// analytic gradient on request.
double image_model(double x, const std::array<double, 2>& p, const ImageModelContext& ctx,
                   std::array<double, 2>* grad = nullptr);

/// Result of the interference fit.
struct InterferenceFit {
    double visibility_V = 0.0;     ///< in [0, 1]
    double fitted_a = 0.0;         ///< meters, envelope (slit width) scale
    double fitted_d = 0.0;         ///< meters, fringe (slit separation) scale
    double envelope_center = 0.0;  ///< meters
    double amplitude = 0.0;        ///< overall scale
    double residual_rms = 0.0;     ///< weighted rms residual
    std::array<std::array<double, 5>, 5> covariance{}; ///< order {A, V, a, d, x0}
    double visibility_stderr = 0.0; ///< 1-sigma; max(covariance, bootstrap) for counts
    int iterations = 0;
};

struct InterferenceFitOptions {
    std::optional<std::array<double, 5>> init; ///< {A, V, a, d, x0} override
    bool fix_slit_geometry = false; ///< hold a and d at the geometry values
};

/// Fits the interference model to a noiseless pattern (unit weights).
/// Preconditions: the scan window spans >= 5 fringe periods (else
/// InsufficientDataError). Non-convergence of all starts -> FitError.
InterferenceFit fit_interference(const Pattern& pattern, const GeometryConfig& geom,
                                 double wavelength, const InterferenceFitOptions& options = {});

/// Fits Poisson counts (weights 1/max(count,1)); the visibility error is
/// the larger of the covariance estimate and a 100-resample parametric
/// bootstrap seeded from the histogram's own seed.
InterferenceFit fit_interference(const CountsHistogram& counts, const GeometryConfig& geom,
                                 double wavelength, const InterferenceFitOptions& options = {});

/// Converts a fitted fringe visibility into the transverse-momentum sum
/// uncertainty that produced it: sigma = sqrt(-2 ln V) / d. Requires
/// 0 < V <= 1 (V == 1 gives exactly 0).
double visibility_to_sum_uncertainty(double visibility, double slit_separation_d);

/// Inverse of the conversion above (the visibility a given sum spread
/// produces): V = exp(-(d * sigma)^2 / 2).
double sum_uncertainty_to_visibility(double sigma_sum, double slit_separation_d);

/// Search window for a peak, by position.
struct PeakWindow {
    double x_min = 0.0;
    double x_max = 0.0;
};

/// Full width at half maximum of the peak inside the window, with linear
/// interpolation at the two half-max crossings. Throws ShapeError when a
/// crossing is missing on either side.
double fwhm(const Pattern& pattern, const PeakWindow& window);

/// Result of the image fit.
struct ImageFit {
    double blur_sigma = 0.0;                 ///< meters
    double amplitude = 0.0;
    std::array<double, 2> peak_centers{};    ///< meters, fixed by geometry (+-d'/2)
    double fwhm_fitted = 0.0;                ///< meters, per fitted peak (symmetric)
    double fwhm_ideal = 0.0;                 ///< meters, = magnified slit width a'
    double residual_rms = 0.0;
    std::array<std::array<double, 2>, 2> covariance{}; ///< order {A, blur_sigma}
    double blur_stderr = 0.0;
    int iterations = 0;
};

/// Fits {amplitude, blur} of the geometry-fixed double-rectangle template.
/// Data showing a single merged peak throws ShapeError.
ImageFit fit_image(const Pattern& pattern, const GeometryConfig& geom);
ImageFit fit_image(const CountsHistogram& counts, const GeometryConfig& geom);

/// Pair position uncertainty read off the fitted image: the mean per-peak
/// FWHM excess over the ideal magnified slit width, at the image plane.
double position_uncertainty_from_image(const ImageFit& fit);

/// Same, referred back to the object (slit) plane by the magnification.
double position_uncertainty_object_plane(const ImageFit& fit, const GeometryConfig& geom);

/// Removes an aperture contribution from a total Gaussian-equivalent blur:
/// sqrt(max(0, sigma^2 - width^2/12)).
double subtract_detector_blur(double total_sigma, double detector_width);

/// Single-arm momentum uncertainty from a beam divergence:
/// delta_k = (2*pi / lambda) * delta_theta.
double divergence_to_single_uncertainty(double delta_theta, double wavelength);

} // namespace ghost
