#include "ghost/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "ghost/errors.hpp"
#include "ghost/rng.hpp"

namespace ghost {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double sinc(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

// d/du [sin(u)/u], stable near zero.
double sinc_prime(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return -u / 3.0 + u * u2 / 30.0;
    }
    return (std::cos(u) - std::sin(u) / u) / u;
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

double normal_pdf(double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * kPi);
}

// ---------------------------------------------------------------------------
// Small damped Gauss-Newton (Levenberg-Marquardt) engine with box bounds.
// ---------------------------------------------------------------------------

struct LMProblem {
    const std::vector<double>* x = nullptr;
    const std::vector<double>* y = nullptr;
    const std::vector<double>* w = nullptr; // nullptr = unit weights
    // model(x_i, p, grad or nullptr) -> value
    std::function<double(double, const double*, double*)> model;
    int n_params = 0;
    std::vector<double> lower, upper;
    std::vector<double> scale;      // characteristic magnitude per parameter
    std::vector<char> free_mask;    // 0 = frozen at its initial value
    int max_iterations = 300;
    double step_tolerance = 1e-8;
};

struct LMOutcome {
    std::vector<double> params;
    std::vector<std::vector<double>> covariance; // n x n, frozen rows/cols zero
    double chi2 = 0.0;
    double weight_sum = 0.0;
    int iterations = 0;
    bool converged = false;
};

double lm_chi2(const LMProblem& prob, const std::vector<double>& p) {
    double chi2 = 0.0;
    const auto& xs = *prob.x;
    const auto& ys = *prob.y;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - prob.model(xs[i], p.data(), nullptr);
        const double wi = prob.w ? (*prob.w)[i] : 1.0;
        chi2 += wi * r * r;
    }
    return chi2;
}

// Solves A * delta = g for a small dense symmetric system; returns false on a
// vanishing pivot.
bool solve_small(std::vector<std::vector<double>> a, std::vector<double> g,
                 std::vector<double>& delta) {
    const int n = static_cast<int>(g.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[pivot], a[col]);
        std::swap(g[pivot], g[col]);
        for (int r = col + 1; r < n; ++r) {
            const double m = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= m * a[col][c];
            g[r] -= m * g[col];
        }
    }
    delta.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = g[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * delta[c];
        delta[r] = s / a[r][r];
    }
    return true;
}

// Inverts a small symmetric positive matrix by Gauss-Jordan; returns false on
// a vanishing pivot.
bool invert_small(std::vector<std::vector<double>> a, std::vector<std::vector<double>>& inv) {
    const int n = static_cast<int>(a.size());
    inv.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const double d = a[col][col];
        for (int c = 0; c < n; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double m = a[r][col];
            if (m == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[r][c] -= m * a[col][c];
                inv[r][c] -= m * inv[col][c];
            }
        }
    }
    return true;
}

void accumulate_normal(const LMProblem& prob, const std::vector<double>& p,
                       const std::vector<int>& free_idx,
                       std::vector<std::vector<double>>& normal, std::vector<double>& rhs) {
    const int k = static_cast<int>(free_idx.size());
    normal.assign(k, std::vector<double>(k, 0.0));
    rhs.assign(k, 0.0);
    std::vector<double> grad(prob.n_params, 0.0);
    const auto& xs = *prob.x;
    const auto& ys = *prob.y;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double f = prob.model(xs[i], p.data(), grad.data());
        const double r = ys[i] - f;
        const double wi = prob.w ? (*prob.w)[i] : 1.0;
        for (int a = 0; a < k; ++a) {
            const double ga = grad[free_idx[a]];
            rhs[a] += wi * ga * r;
            for (int b = a; b < k; ++b) normal[a][b] += wi * ga * grad[free_idx[b]];
        }
    }
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < a; ++b) normal[a][b] = normal[b][a];
}

LMOutcome lm_minimize(const LMProblem& prob, std::vector<double> p) {
    LMOutcome out;
    std::vector<int> free_idx;
    for (int i = 0; i < prob.n_params; ++i) {
        p[i] = std::clamp(p[i], prob.lower[i], prob.upper[i]);
        if (prob.free_mask[i]) free_idx.push_back(i);
    }
    const int k = static_cast<int>(free_idx.size());
    double chi2 = lm_chi2(prob, p);
    double lambda = 1e-3;
    std::vector<std::vector<double>> normal;
    std::vector<double> rhs, delta;
    int iter = 0;
    bool converged = false;
    while (iter < prob.max_iterations && !converged) {
        ++iter;
        accumulate_normal(prob, p, free_idx, normal, rhs);
        bool accepted = false;
        while (!accepted && lambda < 1e15) {
            auto damped = normal;
            for (int a = 0; a < k; ++a) {
                const double diag = std::max(normal[a][a], 1e-300);
                damped[a][a] = normal[a][a] + lambda * diag;
            }
            if (!solve_small(damped, rhs, delta)) {
                lambda *= 4.0;
                continue;
            }
            auto trial = p;
            for (int a = 0; a < k; ++a) {
                const int j = free_idx[a];
                trial[j] = std::clamp(p[j] + delta[a], prob.lower[j], prob.upper[j]);
            }
            const double trial_chi2 = lm_chi2(prob, trial);
            if (trial_chi2 <= chi2) {
                double max_rel_step = 0.0;
                for (int a = 0; a < k; ++a) {
                    const int j = free_idx[a];
                    const double denom = std::max(std::abs(p[j]), prob.scale[j]);
                    max_rel_step = std::max(max_rel_step, std::abs(trial[j] - p[j]) / denom);
                }
                p = trial;
                chi2 = trial_chi2;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (max_rel_step < prob.step_tolerance) converged = true;
            } else {
                lambda *= 4.0;
            }
        }
        if (!accepted) break; // damping exhausted
    }
    out.params = p;
    out.chi2 = chi2;
    out.iterations = iter;
    out.converged = converged;
    out.weight_sum = 0.0;
    for (size_t i = 0; i < prob.x->size(); ++i) out.weight_sum += prob.w ? (*prob.w)[i] : 1.0;

    // Covariance of the free parameters from the undamped normal matrix.
    accumulate_normal(prob, p, free_idx, normal, rhs);
    std::vector<std::vector<double>> inv;
    out.covariance.assign(prob.n_params, std::vector<double>(prob.n_params, 0.0));
    if (invert_small(normal, inv)) {
        const double dof = static_cast<double>(prob.x->size()) - k;
        // Unit-weight fits carry no noise model, so scale by reduced chi2;
        // Poisson-weighted fits are already in natural units.
        const double scale = (prob.w == nullptr && dof > 0) ? chi2 / dof : 1.0;
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                out.covariance[free_idx[a]][free_idx[b]] = inv[a][b] * scale;
    }
    return out;
}

std::string format_quantity(const char* name, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s=%.6g", name, value);
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

double interference_model(double x, const std::array<double, 5>& p,
                          const InterferenceModelContext& ctx, std::array<double, 5>* grad) {
    if (!(ctx.wavelength > 0.0) || !(ctx.focal_length > 0.0)) {
        throw std::invalid_argument("interference_model: wavelength and focal length must be positive");
    }
    const double A = p[0], V = p[1], a = p[2], d = p[3], x0 = p[4];
    const double lf = ctx.wavelength * ctx.focal_length;
    const double u = kPi * (x - x0) * a / lf;
    const double v = 2.0 * kPi * (x - x0) * d / lf;
    const double s = sinc(u);
    const double envelope = s * s;
    const double cosv = std::cos(v);
    const double fringes = 0.5 * (1.0 + V * cosv);
    const double value = A * envelope * fringes;
    if (grad != nullptr) {
        const double dE_du = 2.0 * s * sinc_prime(u);
        const double dF_dv = -0.5 * V * std::sin(v);
        (*grad)[0] = envelope * fringes;
        (*grad)[1] = A * envelope * 0.5 * cosv;
        (*grad)[2] = A * fringes * dE_du * (kPi * (x - x0) / lf);
        (*grad)[3] = A * envelope * dF_dv * (2.0 * kPi * (x - x0) / lf);
        (*grad)[4] = A * (dE_du * (-kPi * a / lf) * fringes +
                          envelope * dF_dv * (-2.0 * kPi * d / lf));
    }
    return value;
}

double image_model(double x, const std::array<double, 2>& p, const ImageModelContext& ctx,
                   std::array<double, 2>* grad) {
    if (!(ctx.a_img > 0.0) || !(ctx.d_img > ctx.a_img)) {
        throw std::invalid_argument("image_model: requires 0 < a_img < d_img");
    }
    const double A = p[0];
    const double sigma = std::max(p[1], 1e-12);
    const double h = 0.5 * ctx.a_img;
    double shape = 0.0;
    double dshape_dsigma = 0.0;
    for (const double c : {-0.5 * ctx.d_img, 0.5 * ctx.d_img}) {
        const double tp = (x - c + h) / sigma;
        const double tm = (x - c - h) / sigma;
        shape += normal_cdf(tp) - normal_cdf(tm);
        dshape_dsigma += (tm * normal_pdf(tm) - tp * normal_pdf(tp)) / sigma;
    }
    if (grad != nullptr) {
        (*grad)[0] = shape;
        (*grad)[1] = A * dshape_dsigma;
    }
    return A * shape;
}

// ---------------------------------------------------------------------------
// Interference fit
// ---------------------------------------------------------------------------

namespace {

struct SeriesData {
    std::vector<double> x, y;
    std::vector<double> w; // empty = unit weights
};

InterferenceFit fit_interference_series(const SeriesData& data, const GeometryConfig& geom,
                                        double wavelength, const InterferenceFitOptions& options) {
    if (data.x.size() < 16) {
        throw InsufficientDataError("interference fit: need at least 16 samples, got " +
                                    std::to_string(data.x.size()));
    }
    const InterferenceModelContext ctx{wavelength, geom.f_imaging};
    const double a0 = geom.slit.slit_width_a;
    const double d0 = geom.slit.slit_separation_d;
    const double period = wavelength * geom.f_imaging / d0;
    const double span = data.x.back() - data.x.front();
    if (span < 5.0 * period) {
        std::ostringstream msg;
        msg << "interference fit: scan window " << span << " m covers fewer than 5 fringe periods ("
            << period << " m each); widen the scan";
        throw InsufficientDataError(msg.str());
    }

    double peak = 0.0;
    double x_at_peak = data.x.front();
    for (size_t i = 0; i < data.y.size(); ++i) {
        if (data.y[i] > peak) {
            peak = data.y[i];
            x_at_peak = data.x[i];
        }
    }
    if (!(peak > 0.0)) throw FitError("interference fit: data contain no positive rates");

    LMProblem prob;
    prob.x = &data.x;
    prob.y = &data.y;
    prob.w = data.w.empty() ? nullptr : &data.w;
    prob.n_params = 5;
    prob.model = [&ctx](double x, const double* p, double* g) {
        std::array<double, 5> params{p[0], p[1], p[2], p[3], p[4]};
        if (g == nullptr) return interference_model(x, params, ctx, nullptr);
        std::array<double, 5> grad{};
        const double f = interference_model(x, params, ctx, &grad);
        std::copy(grad.begin(), grad.end(), g);
        return f;
    };
    prob.lower = {peak * 1e-6, 0.0, 0.5 * a0, 0.5 * d0, x_at_peak - 2.0 * period};
    prob.upper = {peak * 1e6, 1.0, 2.0 * a0, 2.0 * d0, x_at_peak + 2.0 * period};
    prob.scale = {peak, 1.0, a0, d0, period};
    prob.free_mask = {1, 1, 1, 1, 1};
    if (options.fix_slit_geometry) {
        prob.free_mask[2] = 0;
        prob.free_mask[3] = 0;
    }

    std::vector<std::vector<double>> starts;
    if (options.init.has_value()) {
        const auto& init = *options.init;
        starts.push_back({init[0], init[1], init[2], init[3], init[4]});
    } else {
        starts.push_back({peak, 0.7, a0, d0, x_at_peak});
        starts.push_back({peak, 0.2, a0, d0, x_at_peak});
        starts.push_back({peak, 0.9, a0, d0, x_at_peak + 0.125 * period});
    }

    LMOutcome best;
    bool have_best = false;
    for (const auto& start : starts) {
        LMOutcome attempt = lm_minimize(prob, start);
        if (!attempt.converged) continue;
        if (!have_best || attempt.chi2 < best.chi2) {
            best = std::move(attempt);
            have_best = true;
        }
    }
    if (!have_best) {
        std::ostringstream msg;
        msg << "interference fit failed to converge from " << starts.size() << " starts ("
            << format_quantity("peak", peak) << ", " << format_quantity("span_m", span) << ")";
        throw FitError(msg.str());
    }
    if (!(best.params[2] < best.params[3])) {
        std::ostringstream msg;
        msg << "interference fit landed in an unphysical corner: "
            << format_quantity("a_m", best.params[2]) << " >= "
            << format_quantity("d_m", best.params[3]);
        throw FitError(msg.str());
    }

    InterferenceFit fit;
    fit.amplitude = best.params[0];
    fit.visibility_V = best.params[1];
    fit.fitted_a = best.params[2];
    fit.fitted_d = best.params[3];
    fit.envelope_center = best.params[4];
    fit.residual_rms = std::sqrt(best.chi2 / std::max(best.weight_sum, 1e-300));
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) fit.covariance[r][c] = best.covariance[r][c];
    fit.visibility_stderr = std::sqrt(std::max(best.covariance[1][1], 0.0));
    fit.iterations = best.iterations;
    return fit;
}

} // namespace

InterferenceFit fit_interference(const Pattern& pattern, const GeometryConfig& geom,
                                 double wavelength, const InterferenceFitOptions& options) {
    validate(pattern);
    validate(geom);
    SeriesData data;
    data.x = pattern.positions;
    data.y = pattern.rates;
    return fit_interference_series(data, geom, wavelength, options);
}

InterferenceFit fit_interference(const CountsHistogram& counts, const GeometryConfig& geom,
                                 double wavelength, const InterferenceFitOptions& options) {
    validate(geom);
    if (counts.positions.size() != counts.counts.size() || counts.positions.size() < 2) {
        throw std::invalid_argument("interference fit: malformed counts histogram");
    }
    SeriesData data;
    data.x = counts.positions;
    data.y.reserve(counts.counts.size());
    data.w.reserve(counts.counts.size());
    for (const int64_t c : counts.counts) {
        if (c < 0) throw std::invalid_argument("interference fit: negative count");
        data.y.push_back(static_cast<double>(c));
        data.w.push_back(1.0 / std::max<double>(static_cast<double>(c), 1.0));
    }
    InterferenceFit fit = fit_interference_series(data, geom, wavelength, options);

    // Parametric bootstrap of the visibility: resample every bin around the
    // observed count, refit from the optimum, and take the spread.
    constexpr int kResamples = 100;
    InterferenceFitOptions boot_options = options;
    boot_options.init = std::array<double, 5>{fit.amplitude, fit.visibility_V, fit.fitted_a,
                                              fit.fitted_d, fit.envelope_center};
    std::vector<double> visibilities;
    visibilities.reserve(kResamples);
    SeriesData boot = data;
    const uint64_t boot_master = counts.seed ^ 0x9d5c0f2ae31bd64bull;
    for (int r = 0; r < kResamples; ++r) {
        SplitMix64 rng(derive_seed(boot_master, static_cast<uint64_t>(r)));
        for (size_t i = 0; i < data.y.size(); ++i) {
            const double resampled = static_cast<double>(poisson_deviate(rng, data.y[i]));
            boot.y[i] = resampled;
            boot.w[i] = 1.0 / std::max(resampled, 1.0);
        }
        try {
            const InterferenceFit bf = fit_interference_series(boot, geom, wavelength, boot_options);
            visibilities.push_back(bf.visibility_V);
        } catch (const FitError&) {
            // A rare non-converging resample is dropped; the success count is
            // checked below.
        }
    }
    if (visibilities.size() < kResamples / 2) {
        throw FitError("interference fit: bootstrap unstable, only " +
                       std::to_string(visibilities.size()) + " of " +
                       std::to_string(kResamples) + " resamples converged");
    }
    const double mean = std::accumulate(visibilities.begin(), visibilities.end(), 0.0) /
                        static_cast<double>(visibilities.size());
    double var = 0.0;
    for (const double v : visibilities) var += (v - mean) * (v - mean);
    var /= static_cast<double>(visibilities.size() - 1);
    fit.visibility_stderr = std::max(fit.visibility_stderr, std::sqrt(var));
    return fit;
}

double visibility_to_sum_uncertainty(double visibility, double slit_separation_d) {
    if (!(slit_separation_d > 0.0)) {
        throw std::invalid_argument("visibility_to_sum_uncertainty: slit separation must be positive");
    }
    if (!(visibility > 0.0) || visibility > 1.0) {
        throw std::invalid_argument(
            "visibility_to_sum_uncertainty: visibility must lie in (0, 1], got " +
            std::to_string(visibility));
    }
    return std::sqrt(std::max(-2.0 * std::log(visibility), 0.0)) / slit_separation_d;
}

double sum_uncertainty_to_visibility(double sigma_sum, double slit_separation_d) {
    if (!(slit_separation_d > 0.0) || sigma_sum < 0.0) {
        throw std::invalid_argument("sum_uncertainty_to_visibility: bad arguments");
    }
    const double arg = slit_separation_d * sigma_sum;
    return std::exp(-0.5 * arg * arg);
}

// ---------------------------------------------------------------------------
// Peak width measurement
// ---------------------------------------------------------------------------

double fwhm(const Pattern& pattern, const PeakWindow& window) {
    validate(pattern);
    if (!(window.x_max > window.x_min)) {
        throw std::invalid_argument("fwhm: window must satisfy x_min < x_max");
    }
    const auto& xs = pattern.positions;
    const auto& ys = pattern.rates;
    int lo = -1, hi = -1;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < window.x_min || xs[i] > window.x_max) continue;
        if (lo < 0) lo = static_cast<int>(i);
        hi = static_cast<int>(i);
    }
    if (lo < 0 || hi - lo < 2) {
        throw std::invalid_argument("fwhm: window contains fewer than 3 samples");
    }
    int peak = lo;
    for (int i = lo; i <= hi; ++i) {
        if (ys[i] > ys[peak]) peak = i;
    }
    if (!(ys[peak] > 0.0)) throw ShapeError("fwhm: window holds no positive rates");
    const double half = 0.5 * ys[peak];

    auto interpolate = [&](int inside, int outside) {
        const double t = (half - ys[outside]) / (ys[inside] - ys[outside]);
        return xs[outside] + t * (xs[inside] - xs[outside]);
    };
    double left = std::numeric_limits<double>::quiet_NaN();
    for (int i = peak; i > lo; --i) {
        if (ys[i - 1] < half && ys[i] >= half) {
            left = interpolate(i, i - 1);
            break;
        }
    }
    double right = std::numeric_limits<double>::quiet_NaN();
    for (int i = peak; i < hi; ++i) {
        if (ys[i + 1] < half && ys[i] >= half) {
            right = interpolate(i, i + 1);
            break;
        }
    }
    if (std::isnan(left) || std::isnan(right)) {
        throw ShapeError("fwhm: peak does not fall to half maximum inside the window");
    }
    return right - left;
}

// ---------------------------------------------------------------------------
// Image fit
// ---------------------------------------------------------------------------

namespace {

// FWHM of one blurred-rectangle peak of the image model, by bisection on the
// monotone flank.
double blurred_peak_fwhm(double a_img, double sigma) {
    const double h = 0.5 * a_img;
    if (sigma < 1e-12) return a_img;
    auto shape = [&](double x) {
        return normal_cdf((x + h) / sigma) - normal_cdf((x - h) / sigma);
    };
    const double half = 0.5 * shape(0.0);
    double lo = 0.0;
    double hi = h + 12.0 * sigma;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (shape(mid) > half)
            lo = mid;
        else
            hi = mid;
    }
    return 2.0 * 0.5 * (lo + hi);
}

void require_two_peaks(const std::vector<double>& xs, const std::vector<double>& ys,
                       double a_img, double d_img) {
    double peak = 0.0;
    for (const double y : ys) peak = std::max(peak, y);
    if (!(peak > 0.0)) throw FitError("image fit: data contain no positive rates");
    // Collect prominent local maxima and cluster ones closer than a_img/2;
    // two separated clusters mark the two slit images.
    std::vector<double> maxima;
    for (size_t i = 1; i + 1 < ys.size(); ++i) {
        if (ys[i] >= ys[i - 1] && ys[i] >= ys[i + 1] && ys[i] >= 0.5 * peak) {
            maxima.push_back(xs[i]);
        }
    }
    std::vector<double> clusters;
    for (const double m : maxima) {
        if (clusters.empty() || m - clusters.back() > 0.5 * a_img) {
            clusters.push_back(m);
        } else {
            clusters.back() = m; // extend the running cluster
        }
    }
    bool separated = false;
    for (size_t i = 0; i + 1 < clusters.size() && !separated; ++i) {
        for (size_t j = i + 1; j < clusters.size(); ++j) {
            if (clusters[j] - clusters[i] > 0.5 * d_img) {
                separated = true;
                break;
            }
        }
    }
    if (!separated) {
        throw ShapeError("image fit: the two slit images have merged into a single peak; "
                         "the blur is too large to resolve them");
    }
}

ImageFit fit_image_series(const SeriesData& data, const GeometryConfig& geom) {
    const double m = magnification(geom);
    const ImageModelContext ctx{m * geom.slit.slit_width_a, m * geom.slit.slit_separation_d};
    require_two_peaks(data.x, data.y, ctx.a_img, ctx.d_img);

    double peak = 0.0;
    for (const double y : data.y) peak = std::max(peak, y);

    // Blur scale guess from the measured width of the right-hand peak.
    double sigma_init = 0.25 * ctx.a_img;
    {
        Pattern probe;
        probe.positions = data.x;
        probe.rates = data.y;
        probe.label = DetectorPlane::image;
        try {
            const double w = fwhm(probe, PeakWindow{0.5 * ctx.d_img - 0.45 * ctx.d_img,
                                                    0.5 * ctx.d_img + 0.45 * ctx.d_img});
            const double spacing = data.x[1] - data.x[0];
            sigma_init = std::max(0.5 * (w - ctx.a_img), spacing);
        } catch (const ShapeError&) {
        } catch (const std::invalid_argument&) {
        }
    }

    LMProblem prob;
    prob.x = &data.x;
    prob.y = &data.y;
    prob.w = data.w.empty() ? nullptr : &data.w;
    prob.n_params = 2;
    prob.model = [&ctx](double x, const double* p, double* g) {
        std::array<double, 2> params{p[0], p[1]};
        if (g == nullptr) return image_model(x, params, ctx, nullptr);
        std::array<double, 2> grad{};
        const double f = image_model(x, params, ctx, &grad);
        std::copy(grad.begin(), grad.end(), g);
        return f;
    };
    prob.lower = {peak * 1e-3, 1e-8};
    prob.upper = {peak * 1e3, ctx.d_img};
    prob.scale = {peak, 0.1 * ctx.a_img};
    prob.free_mask = {1, 1};

    const std::vector<std::vector<double>> starts = {
        {peak, sigma_init},
        {peak, 2.0 * sigma_init},
        {peak, std::max(0.5 * sigma_init, 2e-8)},
    };
    LMOutcome best;
    bool have_best = false;
    for (const auto& start : starts) {
        LMOutcome attempt = lm_minimize(prob, start);
        if (!attempt.converged) continue;
        if (!have_best || attempt.chi2 < best.chi2) {
            best = std::move(attempt);
            have_best = true;
        }
    }
    if (!have_best) {
        throw FitError("image fit failed to converge from 3 starts (" +
                       format_quantity("sigma_init_m", sigma_init) + ")");
    }

    ImageFit fit;
    fit.amplitude = best.params[0];
    fit.blur_sigma = best.params[1];
    fit.peak_centers = {-0.5 * ctx.d_img, 0.5 * ctx.d_img};
    fit.fwhm_ideal = ctx.a_img;
    fit.fwhm_fitted = blurred_peak_fwhm(ctx.a_img, fit.blur_sigma);
    fit.residual_rms = std::sqrt(best.chi2 / std::max(best.weight_sum, 1e-300));
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) fit.covariance[r][c] = best.covariance[r][c];
    fit.blur_stderr = std::sqrt(std::max(best.covariance[1][1], 0.0));
    fit.iterations = best.iterations;
    return fit;
}

} // namespace

ImageFit fit_image(const Pattern& pattern, const GeometryConfig& geom) {
    validate(pattern);
    validate(geom);
    SeriesData data;
    data.x = pattern.positions;
    data.y = pattern.rates;
    return fit_image_series(data, geom);
}

ImageFit fit_image(const CountsHistogram& counts, const GeometryConfig& geom) {
    validate(geom);
    if (counts.positions.size() != counts.counts.size() || counts.positions.size() < 2) {
        throw std::invalid_argument("image fit: malformed counts histogram");
    }
    SeriesData data;
    data.x = counts.positions;
    data.y.reserve(counts.counts.size());
    data.w.reserve(counts.counts.size());
    for (const int64_t c : counts.counts) {
        if (c < 0) throw std::invalid_argument("image fit: negative count");
        data.y.push_back(static_cast<double>(c));
        data.w.push_back(1.0 / std::max<double>(static_cast<double>(c), 1.0));
    }
    return fit_image_series(data, geom);
}

double position_uncertainty_from_image(const ImageFit& fit) {
    return fit.fwhm_fitted - fit.fwhm_ideal;
}

double position_uncertainty_object_plane(const ImageFit& fit, const GeometryConfig& geom) {
    return position_uncertainty_from_image(fit) / magnification(geom);
}

double subtract_detector_blur(double total_sigma, double detector_width) {
    if (total_sigma < 0.0 || detector_width < 0.0) {
        throw std::invalid_argument("subtract_detector_blur: widths must be non-negative");
    }
    const double removed = detector_width * detector_width / 12.0;
    return std::sqrt(std::max(total_sigma * total_sigma - removed, 0.0));
}

double divergence_to_single_uncertainty(double delta_theta, double wavelength) {
    if (!(delta_theta > 0.0) || !(wavelength > 0.0)) {
        throw std::invalid_argument("divergence_to_single_uncertainty: arguments must be positive");
    }
    return 2.0 * kPi * delta_theta / wavelength;
}

} // namespace ghost
