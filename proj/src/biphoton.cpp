#include "ghost/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ghost/errors.hpp"
#include "ghost/field.hpp"
#include "ghost/propagation.hpp"

namespace ghost {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double u) {
    if (std::abs(u) < 1e-12)
        return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

/// Standard normal CDF.
double phi(double t) {
    return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

/// Fraunhofer double-slit intensity in the back focal plane of a lens with
/// focal length f, peak 1 on axis.
double fraunhofer_double_slit(double x, const DoubleSlitSpec& slit, double f,
                              double wavelength) {
    const double env = sinc(kPi * x * slit.slit_width_a / (wavelength * f));
    const double fringe = std::cos(kPi * x * slit.slit_separation_d / (wavelength * f));
    return env * env * fringe * fringe;
}

} // namespace

void validate(const BiphotonModel& model) {
    if (!(model.wavelength > 0.0))
        throw std::invalid_argument("biphoton model: wavelength must be positive");
    if (!(model.sigma_single > 0.0))
        throw std::invalid_argument("biphoton model: sigma_single must be positive");
    if (!(model.sigma_sum >= 0.0) || !(model.sigma_sum < model.sigma_single))
        throw std::invalid_argument(
            "biphoton model: need 0 <= sigma_sum < sigma_single (entangled regime)");
    if (!(model.singles_divergence > 0.0))
        throw std::invalid_argument("biphoton model: singles_divergence must be positive");
    if (!(model.pump_divergence >= 0.0))
        throw std::invalid_argument("biphoton model: pump_divergence must be >= 0");
}

double sigma_diff(const BiphotonModel& model) {
    validate(model);
    return std::sqrt(4.0 * model.sigma_single * model.sigma_single -
                     model.sigma_sum * model.sigma_sum);
}

double joint_momentum_amplitude(const BiphotonModel& model, double k_signal, double k_idler) {
    validate(model);
    if (!(model.sigma_sum > 0.0))
        throw std::invalid_argument(
            "joint_momentum_amplitude: sigma_sum == 0 is a distributional limit");
    const double sp = model.sigma_sum;
    const double sm = sigma_diff(model);
    const double u = k_signal + k_idler;
    const double v = k_signal - k_idler;
    const double norm = 1.0 / std::sqrt(kPi * sp * sm);
    return norm * std::exp(-u * u / (4.0 * sp * sp)) * std::exp(-v * v / (4.0 * sm * sm));
}

void validate(const GeometryConfig& geom) {
    validate(geom.slit);
    if (!(geom.distance_slit_to_crystal > 0.0) || !(geom.distance_crystal_to_lens > 0.0) ||
        !(geom.lens_to_image_plane > 0.0))
        throw std::invalid_argument("geometry: propagation distances must be positive");
    if (!(geom.f_imaging > 0.0) || !(geom.f_collection > 0.0))
        throw std::invalid_argument("geometry: focal lengths must be positive");
    if (geom.d2_width < 0.0 || geom.d3_width < 0.0)
        throw std::invalid_argument("geometry: detector apertures must be >= 0");
}

double analytic_ghost_interference(double x2, const GeometryConfig& geom, double wavelength) {
    validate(geom);
    if (!(wavelength > 0.0))
        throw std::invalid_argument("analytic_ghost_interference: wavelength must be positive");
    return fraunhofer_double_slit(x2, geom.slit, geom.f_imaging, wavelength);
}

Pattern analytic_interference_pattern(const GeometryConfig& geom, double wavelength,
                                      const TransverseGrid& grid) {
    Pattern p;
    p.label = DetectorPlane::focal;
    p.positions = grid.positions();
    p.rates.reserve(p.positions.size());
    for (double x : p.positions)
        p.rates.push_back(analytic_ghost_interference(x, geom, wavelength));
    normalize_peak(p);
    return p;
}

double momentum_spread_to_focal_blur(double sigma_k, const GeometryConfig& geom,
                                     double wavelength) {
    if (sigma_k < 0.0)
        throw std::invalid_argument("momentum_spread_to_focal_blur: spread must be >= 0");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("momentum_spread_to_focal_blur: wavelength must be positive");
    return geom.f_imaging * sigma_k * wavelength / (2.0 * kPi);
}

Pattern klyshko_pattern_with_mask(const BiphotonModel& model, const GeometryConfig& geom,
                                  const TransverseGrid& grid, const std::vector<double>& mask) {
    validate(model);
    validate(geom);
    if (mask.size() != static_cast<std::size_t>(grid.n))
        throw std::invalid_argument("klyshko pattern: mask size does not match grid");

    // Resolution preconditions. The slit needs >= 10 samples across each
    // opening; the focal-plane fringe (period lambda*f/d) needs >= 10 of
    // the focal-plane samples, whose pitch is lambda*f/extent, i.e. the
    // grid extent must span >= 10 slit separations.
    const double a = geom.slit.slit_width_a;
    const double d = geom.slit.slit_separation_d;
    if (grid.spacing > a / 10.0 || grid.extent() < 10.0 * d) {
        const int need_n = static_cast<int>(std::ceil(std::max(10.0 * d, grid.extent()) /
                                                      std::min(a / 10.0, grid.spacing)));
        std::ostringstream msg;
        msg << "klyshko pattern: grid under-resolves the slit plane; need spacing <= "
            << a / 10.0 << " m (10 samples per slit) and extent >= " << 10.0 * d
            << " m (10 samples per focal-plane fringe), e.g. " << need_n
            << " samples over " << std::max(10.0 * d, grid.extent()) << " m";
        throw ResolutionError(msg.str());
    }

    // Backward wave from the point trigger detector, collimated by the
    // collection lens, arrives as a unit plane wave and picks up the slit.
    ComplexField field = make_field(grid, model.wavelength);
    for (int i = 0; i < grid.n; ++i)
        field.values[static_cast<std::size_t>(i)] = mask[static_cast<std::size_t>(i)];

    // Slit plane -> source plane.
    field = fresnel_propagate(field, geom.distance_slit_to_crystal);

    // A plane-wave pump reverses the transverse momentum of the advanced
    // wave exactly: phase conjugation.
    for (auto& v : field.values)
        v = std::conj(v);

    // Source plane -> imaging lens -> back focal plane.
    field = fresnel_propagate(field, geom.distance_crystal_to_lens);
    field = thin_lens(field, geom.f_imaging);
    field = fresnel_propagate(field, geom.f_imaging);

    Pattern p;
    p.label = DetectorPlane::focal;
    p.positions = grid.positions();
    p.rates.reserve(p.positions.size());
    for (const auto& v : field.values)
        p.rates.push_back(std::norm(v));
    normalize_peak(p);

    // Partial anticorrelation shifts the whole focal pattern by the pump's
    // leftover transverse momentum; averaging over that Gaussian spread is
    // an intensity convolution. The finite scan aperture joins it in
    // quadrature as an equivalent Gaussian.
    const double blur_corr = momentum_spread_to_focal_blur(model.sigma_sum, geom,
                                                           model.wavelength);
    const double blur_det = geom.d2_width / std::sqrt(12.0);
    const double blur_pump = geom.f_imaging * model.pump_divergence;
    const double blur = std::hypot(std::hypot(blur_corr, blur_det), blur_pump);
    if (blur > 0.0) {
        p = smear_pattern(p, blur);
        normalize_peak(p);
    }
    return p;
}

Pattern klyshko_interference_pattern(const BiphotonModel& model, const GeometryConfig& geom,
                                     const TransverseGrid& grid) {
    return klyshko_pattern_with_mask(model, geom, grid, double_slit_mask(grid, geom.slit));
}

LensCheck check_two_photon_lens_equation(const GeometryConfig& geom, double tolerance) {
    validate(geom);
    if (!(tolerance >= 0.0))
        throw std::invalid_argument("lens equation check: tolerance must be >= 0");
    const double so = geom.object_distance();
    const double si = geom.image_distance();
    const double residual = std::abs(1.0 / si + 1.0 / so - 1.0 / geom.f_imaging) * geom.f_imaging;
    return LensCheck{residual, residual <= tolerance};
}

double magnification(const GeometryConfig& geom) {
    validate(geom);
    return geom.image_distance() / geom.object_distance();
}

double ideal_ghost_image(double x3, const GeometryConfig& geom) {
    const LensCheck check = check_two_photon_lens_equation(geom);
    if (!check.satisfied) {
        std::ostringstream msg;
        msg << "ideal_ghost_image: check_two_photon_lens_equation failed "
            << "(residual " << check.residual << " > 0.02); no sharp image forms";
        throw ConfigurationError(msg.str());
    }
    const double m = magnification(geom);
    const double a_img = m * geom.slit.slit_width_a;
    const double d_img = m * geom.slit.slit_separation_d;
    return (std::abs(std::abs(x3) - d_img / 2) <= a_img / 2) ? 1.0 : 0.0;
}

Pattern ideal_ghost_image_pattern(const GeometryConfig& geom, const TransverseGrid& grid) {
    Pattern p;
    p.label = DetectorPlane::image;
    p.positions = grid.positions();
    p.rates.reserve(p.positions.size());
    for (double x : p.positions)
        p.rates.push_back(ideal_ghost_image(x, geom));
    return p;
}

Pattern ghost_image_pattern(const GeometryConfig& geom, double blur_sigma,
                            const TransverseGrid& grid) {
    if (std::isnan(blur_sigma) || blur_sigma < 0.0)
        throw std::invalid_argument("ghost_image_pattern: blur must be >= 0");
    if (blur_sigma == 0.0)
        return ideal_ghost_image_pattern(geom, grid);

    // Touch the lens-equation gate exactly like the ideal image does.
    (void)ideal_ghost_image(0.0, geom);

    const double m = magnification(geom);
    const double a_img = m * geom.slit.slit_width_a;
    const double d_img = m * geom.slit.slit_separation_d;

    // rect (*) Gaussian has the closed form Phi((x-e1)/s) - Phi((x-e2)/s)
    // per opening; evaluating it beats discrete convolution at the edges.
    Pattern p;
    p.label = DetectorPlane::image;
    p.positions = grid.positions();
    p.rates.reserve(p.positions.size());
    for (double x : p.positions) {
        double r = 0.0;
        for (double c : {-d_img / 2, d_img / 2}) {
            r += phi((x - c + a_img / 2) / blur_sigma) -
                 phi((x - c - a_img / 2) / blur_sigma);
        }
        p.rates.push_back(r);
    }
    normalize_peak(p);
    return p;
}

Pattern singles_pattern(const BiphotonModel& model, const GeometryConfig& geom,
                        SinglesDetector which, const TransverseGrid& grid) {
    validate(model);
    validate(geom);

    const double divergence = model.sigma_single * model.wavelength / (2.0 * kPi);

    if (which == SinglesDetector::d1) {
        // Behind the slit the trigger detector scans the collection lens's
        // focal plane. Each incidence angle theta shifts the slit
        // diffraction pattern by f_c * theta; the angle spread of the
        // source averages those shifts incoherently.
        const double sigma_x = geom.f_collection * divergence;
        // Evaluate on a padded axis so the smear sees the pattern's tails,
        // then cut back to the requested window.
        const int extra = static_cast<int>(std::ceil(8.0 * sigma_x / grid.spacing));
        const int n_wide = grid.n + 2 * extra;
        Pattern p;
        p.label = DetectorPlane::focal;
        p.positions.reserve(static_cast<std::size_t>(n_wide));
        const double x0 = grid.position(0) - extra * grid.spacing;
        for (int i = 0; i < n_wide; ++i)
            p.positions.push_back(x0 + i * grid.spacing);
        p.rates.reserve(p.positions.size());
        for (double x : p.positions)
            p.rates.push_back(fraunhofer_double_slit(x, geom.slit, geom.f_collection,
                                                     model.wavelength));
        if (sigma_x > 0.0)
            p = smear_pattern(p, sigma_x);
        Pattern clipped;
        clipped.label = p.label;
        for (std::size_t i = static_cast<std::size_t>(extra);
             i < static_cast<std::size_t>(extra + grid.n); ++i) {
            clipped.positions.push_back(p.positions[i]);
            clipped.rates.push_back(p.rates[i]);
        }
        normalize_peak(clipped);
        return clipped;
    }

    // No aperture in the scan arm: the detector sees the full beam, whose
    // angular content (singles_divergence) dwarfs the coincidence-filtered
    // spread, leaving a structureless bell across any realistic window.
    const double coeff = (which == SinglesDetector::d2)
                             ? geom.f_imaging
                             : std::abs(geom.distance_crystal_to_lens + geom.lens_to_image_plane -
                                        geom.distance_crystal_to_lens * geom.lens_to_image_plane /
                                            geom.f_imaging);
    const double sigma_x = coeff * model.singles_divergence;
    Pattern p;
    p.label = (which == SinglesDetector::d2) ? DetectorPlane::focal : DetectorPlane::image;
    p.positions = grid.positions();
    p.rates.reserve(p.positions.size());
    for (double x : p.positions)
        p.rates.push_back(std::exp(-x * x / (2.0 * sigma_x * sigma_x)));
    normalize_peak(p);
    return p;
}

} // namespace ghost
