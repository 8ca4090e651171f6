#pragma once

#include <complex>

#include "ghost/apertures.hpp"
#include "ghost/grid.hpp"
#include "ghost/pattern.hpp"

namespace ghost {

/// Two-photon source model. The joint transverse-momentum amplitude is a
/// double Gaussian: a narrow factor in the sum k_s + k_i (width set by
/// sigma_sum, the anticorrelation strength) and a wide factor in the
/// difference, chosen so each photon's momentum marginal has standard
/// deviation sigma_single. Entangled regime: 0 <= sigma_sum < sigma_single.
struct BiphotonModel {
    double wavelength = 0.0;        ///< meters (degenerate signal/idler)
    double sigma_sum = 0.0;         ///< 1/meters, std of k_s + k_i
    double sigma_single = 0.0;      ///< 1/meters, std of each marginal
    /// Angular spread of the pump beam, radians (0 = plane-wave pump). A
    /// diverging pump loosens the sum-momentum anchor, entering the focal
    /// pattern as one more Gaussian smear in quadrature.
    double pump_divergence = 0.0;
    /// Effective angular spread of all light reaching the scan detectors,
    /// radians. Singles at the open (slitless) detectors are dominated by
    /// off-degenerate emission spanning far more angle than the
    /// coincidence-filtered component, which is why those scans look flat.
    double singles_divergence = 0.020;
};

/// Throws std::invalid_argument unless wavelength > 0, sigma_single > 0,
/// 0 <= sigma_sum < sigma_single, and singles_divergence > 0.
void validate(const BiphotonModel& model);

/// Width of the difference-momentum factor, sqrt(4*sigma_single^2 - sigma_sum^2).
double sigma_diff(const BiphotonModel& model);

/// Normalized joint momentum amplitude evaluated at (k_s, k_i); requires
/// sigma_sum > 0 (the perfectly anticorrelated limit is a distribution,
/// not a function).
double joint_momentum_amplitude(const BiphotonModel& model, double k_signal, double k_idler);

/// How the trigger detector in the slit arm is modeled.
enum class DetectorMode { point, bucket };

/// Which detector a singles scan refers to.
enum class SinglesDetector { d1, d2, d3 };

/// Unfolded two-arm geometry. The slit sits distance_slit_to_crystal from
/// the source in one arm; the other arm holds the imaging lens at
/// distance_crystal_to_lens, with the image detector plane a further
/// lens_to_image_plane downstream and the interference detector in the
/// lens's back focal plane.
struct GeometryConfig {
    DoubleSlitSpec slit;
    double distance_slit_to_crystal = 0.0;  ///< meters (a1)
    double distance_crystal_to_lens = 0.0;  ///< meters (a2)
    double lens_to_image_plane = 0.0;       ///< meters (b)
    double f_imaging = 0.0;                 ///< meters
    double f_collection = 0.0;              ///< meters (trigger-arm lens)
    DetectorMode d1_mode = DetectorMode::point;
    double d2_width = 0.0;                  ///< meters, interference-scan aperture
    double d3_width = 0.0;                  ///< meters, image-scan aperture

    /// Object distance of the unfolded two-photon imaging system: the
    /// optical path from slit through the source plane to the lens.
    double object_distance() const { return distance_slit_to_crystal + distance_crystal_to_lens; }
    double image_distance() const { return lens_to_image_plane; }
};

/// Throws std::invalid_argument on nonpositive distances/focal lengths,
/// negative apertures, or an invalid slit.
void validate(const GeometryConfig& geom);

/// Closed-form coincidence rate at interference-detector position x2 for a
/// perfectly anticorrelated source and a point trigger detector:
/// sinc^2(x2*pi*a/(lambda*f)) * cos^2(x2*pi*d/(lambda*f)), peak 1 at x2=0.
double analytic_ghost_interference(double x2, const GeometryConfig& geom, double wavelength);

/// The same closed form sampled on a grid of detector positions.
Pattern analytic_interference_pattern(const GeometryConfig& geom, double wavelength,
                                      const TransverseGrid& grid);

/// Coincidence interference pattern from the advanced-wave simulation:
/// the trigger detector acts as a point source whose backward wave reaches
/// the slit plane collimated (ideal collection lens), passes the slit,
/// propagates to the source plane, is phase-conjugated there, then runs
/// forward through the imaging arm to the back focal plane. Partial
/// anticorrelation (sigma_sum > 0) and the finite d2 aperture enter as one
/// aggregated Gaussian smear of the focal-plane intensity.
///
/// The grid is the slit-plane sampling; it must resolve the slit width and
/// the focal-plane fringe with >= 10 samples each, else ResolutionError
/// stating the required counts. Output positions are the focal-plane
/// samples of the same grid.
Pattern klyshko_interference_pattern(const BiphotonModel& model, const GeometryConfig& geom,
                                     const TransverseGrid& grid);

/// Same pipeline with an explicit slit-plane transmission mask (for
/// aperture variants, e.g. a single slit).
Pattern klyshko_pattern_with_mask(const BiphotonModel& model, const GeometryConfig& geom,
                                  const TransverseGrid& grid, const std::vector<double>& mask);

/// Focal-plane blur produced by a transverse-momentum spread:
/// sigma_x = f * sigma_k * lambda / (2*pi).
double momentum_spread_to_focal_blur(double sigma_k, const GeometryConfig& geom,
                                     double wavelength);

/// Two-photon Gaussian lens equation diagnostics for the unfolded geometry.
struct LensCheck {
    double residual = 0.0; ///< |1/s_i + 1/s_o - 1/f| * f, dimensionless
    bool satisfied = false;
};
LensCheck check_two_photon_lens_equation(const GeometryConfig& geom, double tolerance = 0.02);

/// Image magnification s_i / s_o of the unfolded system.
double magnification(const GeometryConfig& geom);

/// Geometric coincidence image at image-plane position x3: the slit pair
/// magnified to width a' = m*a at centers +-d'/2, d' = m*d; 1 inside an
/// opening, 0 outside. Throws ConfigurationError if the geometry misses
/// the lens equation by more than 2%.
double ideal_ghost_image(double x3, const GeometryConfig& geom);

/// The geometric image sampled on a grid of image-plane positions.
Pattern ideal_ghost_image_pattern(const GeometryConfig& geom, const TransverseGrid& grid);

/// Geometric image convolved with a unit-area Gaussian blur (closed form).
/// blur_sigma aggregates the position-correlation width and the detector
/// aperture; blur_sigma == 0 reproduces ideal_ghost_image_pattern.
Pattern ghost_image_pattern(const GeometryConfig& geom, double blur_sigma,
                            const TransverseGrid& grid);

/// Singles rate of one detector, scanned over the grid positions.
/// d1: incoherent angle-average of the slit diffraction pattern in the
///     collection lens's focal plane; the average restores fringes as
///     sigma_single -> 0 and washes them out at the preset divergence.
/// d2/d3: structureless wide bell set by singles_divergence (no slit in
///     that arm, so the scan sees only the smooth beam profile).
Pattern singles_pattern(const BiphotonModel& model, const GeometryConfig& geom,
                        SinglesDetector which, const TransverseGrid& grid);

} // namespace ghost
