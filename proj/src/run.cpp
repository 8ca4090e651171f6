#include "ghost/run.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ghost/biphoton.hpp"
#include "ghost/classical.hpp"
#include "ghost/counts.hpp"
#include "ghost/epr.hpp"
#include "ghost/errors.hpp"
#include "ghost/fit.hpp"
#include "ghost/pattern.hpp"
#include "ghost/report_io.hpp"
#include "ghost/rng.hpp"

namespace ghost {

namespace {

using nlohmann::ordered_json;

constexpr double kPi = 3.141592653589793238462643383279502884;

// Seed-stream allocation off the master seed. Every stochastic stage gets
// its own derived stream so reruns are byte-identical and stages stay
// independent of each other.
constexpr std::uint64_t kStreamFringeCounts = 1;
constexpr std::uint64_t kStreamImageCounts = 2;
constexpr std::uint64_t kStreamClassicalStats = 3;
constexpr std::uint64_t kStreamClassicalPattern = 4;
constexpr std::uint64_t kStreamSweepBase = 1000; // + 2*index (+1 for stats)

ordered_json q_mm(double meters) { return quantity(meters * 1e3, "mm"); }
ordered_json q_per_mm(double per_meter) { return quantity(per_meter * 1e-3, "1/mm"); }
ordered_json q_mrad(double radians) { return quantity(radians * 1e3, "mrad"); }
ordered_json q_nm(double meters) { return quantity(meters * 1e9, "nm"); }

const char* to_string(DetectorMode mode) {
    return mode == DetectorMode::point ? "point" : "bucket";
}

const char* to_string(MomentumDistribution dist) {
    return dist == MomentumDistribution::gaussian ? "gaussian" : "uniform";
}

ordered_json inputs_json(const ExperimentConfig& cfg, std::uint64_t seed) {
    const BiphotonModel& b = cfg.biphoton;
    const GeometryConfig& g = cfg.geometry;
    ordered_json j;
    j["mode"] = to_string(cfg.mode);
    j["config_source"] = cfg.source_name;
    j["biphoton"] = ordered_json{
        {"wavelength", q_nm(b.wavelength)},
        {"sigma_sum", q_per_mm(b.sigma_sum)},
        {"sigma_single", q_per_mm(b.sigma_single)},
        {"pump_divergence", q_mrad(b.pump_divergence)},
        {"singles_divergence", q_mrad(b.singles_divergence)},
    };
    j["slit"] = ordered_json{
        {"width", q_mm(g.slit.slit_width_a)},
        {"separation", q_mm(g.slit.slit_separation_d)},
    };
    j["geometry"] = ordered_json{
        {"slit_to_crystal", q_mm(g.distance_slit_to_crystal)},
        {"crystal_to_lens", q_mm(g.distance_crystal_to_lens)},
        {"lens_to_image", q_mm(g.lens_to_image_plane)},
        {"focal_length", q_mm(g.f_imaging)},
        {"collection_focal_length", q_mm(g.f_collection)},
        {"d1_mode", to_string(g.d1_mode)},
        {"d2_width", q_mm(g.d2_width)},
        {"d3_width", q_mm(g.d3_width)},
    };
    j["grid"] = ordered_json{
        {"samples", cfg.grid.samples},
        {"extent", q_mm(cfg.grid.extent)},
    };
    j["scan"] = ordered_json{
        {"interference_half_width", q_mm(cfg.scan.interference_half_width)},
        {"image_half_width", q_mm(cfg.scan.image_half_width)},
    };
    j["counts"] = ordered_json{{"total", cfg.counts.total}, {"seed", seed}};
    if (cfg.mode == RunMode::image || cfg.mode == RunMode::report) {
        j["image"] = ordered_json{{"blur_sigma", q_mm(cfg.image.blur_sigma)}};
    }
    if (cfg.classical && (cfg.mode == RunMode::classical || cfg.mode == RunMode::report)) {
        const ClassicalGunModel& c = *cfg.classical;
        j["classical"] = ordered_json{
            {"k_spread", q_per_mm(c.k_spread)},
            {"source_width", q_mm(c.source_width_w)},
            {"noise_sigma", q_per_mm(c.noise_sigma)},
            {"aim", to_string(c.aim_distribution)},
            {"shared_emission", c.shared_emission},
            {"flight_distance", q_mm(c.flight_distance)},
            {"pairs", cfg.classical_pairs},
            {"stats_samples", cfg.classical_stats_samples},
        };
    }
    if (cfg.epr_inline && cfg.mode == RunMode::report) {
        const InlineUncertainties& e = *cfg.epr_inline;
        j["epr"] = ordered_json{
            {"dk1", q_per_mm(e.dk1)},       {"dk2", q_per_mm(e.dk2)},
            {"dk_sum", q_per_mm(e.dk_sum)}, {"dx1", q_mm(e.dx1)},
            {"dx2", q_mm(e.dx2)},           {"dx_diff", q_mm(e.dx_diff)},
        };
    }
    if (cfg.mode == RunMode::sweep) {
        j["sweep"] = ordered_json{
            {"models", cfg.sweep.models},
            {"samples_per_model", cfg.sweep.samples_per_model},
        };
    }
    return j;
}

ordered_json interference_fit_json(const InterferenceFit& fit, const GeometryConfig& geom,
                                   double wavelength) {
    ordered_json j;
    j["visibility"] = fit.visibility_V;
    j["visibility_stderr"] = fit.visibility_stderr;
    j["fitted_slit_width"] = q_mm(fit.fitted_a);
    j["fitted_slit_separation"] = q_mm(fit.fitted_d);
    j["envelope_center"] = q_mm(fit.envelope_center);
    j["fringe_period"] = q_mm(wavelength * geom.f_imaging / fit.fitted_d);
    j["envelope_first_zero"] = q_mm(wavelength * geom.f_imaging / fit.fitted_a);
    const double d = geom.slit.slit_separation_d;
    const double v = fit.visibility_V;
    if (v > 0.0 && v < 1.0) {
        const double sigma = visibility_to_sum_uncertainty(v, d);
        // d(sigma)/dV = 1 / (d * V * sqrt(-2 ln V)), so the quoted error is
        // the visibility error mapped through the conversion.
        const double sigma_err = fit.visibility_stderr / (d * v * std::sqrt(-2.0 * std::log(v)));
        j["recovered_sigma_sum"] = ordered_json{
            {"value", sigma * 1e-3},
            {"stderr", sigma_err * 1e-3},
            {"unit", "1/mm"},
        };
    } else {
        j["recovered_sigma_sum"] = nullptr;
    }
    j["residual_rms"] = fit.residual_rms;
    j["iterations"] = fit.iterations;
    return j;
}

ordered_json image_fit_json(const ImageFit& fit, const GeometryConfig& geom) {
    const LensCheck lens = check_two_photon_lens_equation(geom);
    ordered_json j;
    j["blur_sigma"] = q_mm(fit.blur_sigma);
    j["blur_stderr"] = q_mm(fit.blur_stderr);
    j["blur_sigma_detector_corrected"] =
        q_mm(subtract_detector_blur(fit.blur_sigma, geom.d3_width));
    j["peak_centers"] = ordered_json::array({q_mm(fit.peak_centers[0]), q_mm(fit.peak_centers[1])});
    j["peak_separation"] = q_mm(fit.peak_centers[1] - fit.peak_centers[0]);
    j["fwhm_fitted"] = q_mm(fit.fwhm_fitted);
    j["fwhm_ideal"] = q_mm(fit.fwhm_ideal);
    j["position_uncertainty_image_plane"] = q_mm(position_uncertainty_from_image(fit));
    j["position_uncertainty_object_plane"] = q_mm(position_uncertainty_object_plane(fit, geom));
    j["magnification"] = magnification(geom);
    j["lens_residual"] = lens.residual;
    j["lens_equation_satisfied"] = lens.satisfied;
    j["residual_rms"] = fit.residual_rms;
    j["iterations"] = fit.iterations;
    return j;
}

ordered_json stats_json(const CorrelationStats& s) {
    return ordered_json{
        {"dk1", q_per_mm(s.dk1)},
        {"dk2", q_per_mm(s.dk2)},
        {"dk_sum", q_per_mm(s.dk_sum)},
        {"dx1", q_mm(s.dx1)},
        {"dx2", q_mm(s.dx2)},
        {"dx_diff", q_mm(s.dx_diff)},
        {"dk1_indep", q_per_mm(s.dk1_indep)},
        {"dk2_indep", q_per_mm(s.dk2_indep)},
        {"n_samples", s.n_samples},
    };
}

ordered_json bounds_json(const ClassicalBoundsVerdict& v) {
    return ordered_json{
        {"eq8_momentum_ok", v.eq8_momentum_ok},
        {"eq8_position_ok", v.eq8_position_ok},
        {"eq3_violated_as_expected", v.eq3_violated_as_expected},
        {"uncertainty_product", v.uncertainty_product},
        {"eps_stat", v.eps_stat},
    };
}

ordered_json epr_json(const EprReport& r) {
    ordered_json j;
    j["dk1"] = q_per_mm(r.dk1);
    j["dk2"] = q_per_mm(r.dk2);
    j["dk_sum"] = q_per_mm(r.dk_sum);
    j["dx1"] = q_mm(r.dx1);
    j["dx2"] = q_mm(r.dx2);
    j["dx_diff"] = q_mm(r.dx_diff);
    j["epr_momentum_ok"] = r.epr_momentum_ok;
    j["epr_position_ok"] = r.epr_position_ok;
    j["product"] = r.product;
    j["product_below_one"] = r.product_below_one;
    j["classical_bounds"] =
        r.classical_bounds_evaluated ? bounds_json(r.classical_bounds) : ordered_json(nullptr);
    j["caveat"] = r.caveat;
    j["convention_note"] = r.convention_note;
    return j;
}

void require_d1_mode(const ExperimentConfig& cfg, DetectorMode required, const char* mode_name) {
    if (cfg.geometry.d1_mode != required) {
        throw ConfigurationError(std::string(mode_name) + " mode requires d1_mode = " +
                                 to_string(required) + " (configured: " +
                                 to_string(cfg.geometry.d1_mode) + ")");
    }
}

void add_artifact(std::vector<std::filesystem::path>& artifacts,
                  const std::filesystem::path& path) {
    artifacts.push_back(path);
}

// Fringe leg: advanced-wave coincidence pattern, clipped scan window,
// Poisson counts, five-parameter fit.
InterferenceFit run_interference_leg(const ExperimentConfig& cfg, const GeometryConfig& geom,
                                     std::uint64_t seed, const std::filesystem::path& out_dir,
                                     std::vector<std::filesystem::path>& artifacts) {
    const TransverseGrid grid = make_grid(cfg.grid.samples, cfg.grid.extent);
    const Pattern full = klyshko_interference_pattern(cfg.biphoton, geom, grid);
    Pattern window = clip_window(full, cfg.scan.interference_half_width);
    normalize_peak(window);
    const CountsHistogram counts =
        sample_counts(window, cfg.counts.total, derive_seed(seed, kStreamFringeCounts));
    const InterferenceFit fit = fit_interference(counts, geom, cfg.biphoton.wavelength);

    const auto pattern_path = out_dir / "interference_pattern.csv";
    const auto counts_path = out_dir / "interference_counts.csv";
    write_pattern_csv(pattern_path, window);
    write_counts_csv(counts_path, counts);
    add_artifact(artifacts, pattern_path);
    add_artifact(artifacts, counts_path);
    return fit;
}

// Image leg: blurred geometric image (detector aperture folded into the
// blur in quadrature), clipped scan window, Poisson counts, template fit.
ImageFit run_image_leg(const ExperimentConfig& cfg, const GeometryConfig& geom,
                       std::uint64_t seed, const std::filesystem::path& out_dir,
                       std::vector<std::filesystem::path>& artifacts) {
    const TransverseGrid grid = make_grid(cfg.grid.samples, cfg.grid.extent);
    const double detector_sigma = geom.d3_width / std::sqrt(12.0);
    const double total_blur = std::hypot(cfg.image.blur_sigma, detector_sigma);
    const Pattern full = ghost_image_pattern(geom, total_blur, grid);
    Pattern window = clip_window(full, cfg.scan.image_half_width);
    normalize_peak(window);
    const CountsHistogram counts =
        sample_counts(window, cfg.counts.total, derive_seed(seed, kStreamImageCounts));
    const ImageFit fit = fit_image(counts, geom);

    const auto pattern_path = out_dir / "image_pattern.csv";
    const auto counts_path = out_dir / "image_counts.csv";
    write_pattern_csv(pattern_path, window);
    write_counts_csv(counts_path, counts);
    add_artifact(artifacts, pattern_path);
    add_artifact(artifacts, counts_path);
    return fit;
}

ordered_json run_classical_mode(const ExperimentConfig& cfg, std::uint64_t seed,
                                const std::filesystem::path& out_dir,
                                std::vector<std::filesystem::path>& artifacts) {
    if (!cfg.classical) {
        throw ConfigurationError(cfg.source_name +
                                 ": classical mode requires a [classical] section");
    }
    const ClassicalGunModel& model = *cfg.classical;

    const CorrelationStats stats =
        classical_stats(model, cfg.classical_stats_samples, derive_seed(seed, kStreamClassicalStats));
    const ClassicalBoundsVerdict verdict = verify_classical_bounds(stats);

    const TransverseGrid grid = make_grid(cfg.grid.samples, cfg.grid.extent);
    const Pattern full =
        classical_coincidence_pattern(model, cfg.geometry, cfg.biphoton.wavelength,
                                      cfg.classical_pairs,
                                      derive_seed(seed, kStreamClassicalPattern), grid);
    Pattern window = clip_window(full, cfg.scan.interference_half_width);
    normalize_peak(window);

    // Residual fringe content: fit with the slit geometry frozen so the
    // visibility is read at the true fringe frequency even when the
    // pattern is nearly structureless.
    InterferenceFitOptions options;
    options.fix_slit_geometry = true;
    const InterferenceFit washout =
        fit_interference(window, cfg.geometry, cfg.biphoton.wavelength, options);

    const auto pattern_path = out_dir / "classical_pattern.csv";
    write_pattern_csv(pattern_path, window);
    add_artifact(artifacts, pattern_path);

    ordered_json fits;
    fits["correlation_stats"] = stats_json(stats);
    fits["classical_bounds"] = bounds_json(verdict);
    fits["pattern_fit"] = ordered_json{
        {"visibility", washout.visibility_V},
        {"visibility_stderr", washout.visibility_stderr},
        {"residual_rms", washout.residual_rms},
        {"iterations", washout.iterations},
    };
    return fits;
}

double log_uniform(SplitMix64& rng, double lo, double hi) {
    return lo * std::exp(rng.uniform() * std::log(hi / lo));
}

ordered_json run_sweep_mode(const ExperimentConfig& cfg, std::uint64_t seed,
                            const std::filesystem::path& out_dir,
                            std::vector<std::filesystem::path>& artifacts) {
    const int models = cfg.sweep.models;
    std::ostringstream table;
    table << "model_index,aim_distribution,k_spread_per_mm,source_width_mm,noise_sigma_per_mm,"
             "dk_sum_per_mm,dx_diff_mm,uncertainty_product,eq8_momentum_ok,eq8_position_ok,"
             "eq3_violated_as_expected\n";
    table << std::setprecision(10);

    bool all_momentum = true;
    bool all_position = true;
    bool all_eq3 = true;
    double min_product = std::numeric_limits<double>::infinity();
    int min_product_index = -1;

    for (int i = 0; i < models; ++i) {
        SplitMix64 rng(derive_seed(seed, kStreamSweepBase + 2 * static_cast<std::uint64_t>(i)));
        ClassicalGunModel model;
        model.aim_distribution =
            (i % 2 == 0) ? MomentumDistribution::gaussian : MomentumDistribution::uniform;
        model.k_spread = log_uniform(rng, 1e3, 1e5);        // 1 .. 100 per mm
        model.source_width_w = log_uniform(rng, 1e-5, 2e-4); // 0.01 .. 0.2 mm
        const double floor = 1.0 / (2.0 * model.source_width_w);
        model.noise_sigma = floor * log_uniform(rng, 1.0, 5.0);

        const CorrelationStats stats = classical_stats(
            model, cfg.sweep.samples_per_model,
            derive_seed(seed, kStreamSweepBase + 2 * static_cast<std::uint64_t>(i) + 1));
        const ClassicalBoundsVerdict verdict = verify_classical_bounds(stats);

        all_momentum = all_momentum && verdict.eq8_momentum_ok;
        all_position = all_position && verdict.eq8_position_ok;
        all_eq3 = all_eq3 && verdict.eq3_violated_as_expected;
        if (verdict.uncertainty_product < min_product) {
            min_product = verdict.uncertainty_product;
            min_product_index = i;
        }

        table << i << ',' << to_string(model.aim_distribution) << ',' << model.k_spread * 1e-3
              << ',' << model.source_width_w * 1e3 << ',' << model.noise_sigma * 1e-3 << ','
              << stats.dk_sum * 1e-3 << ',' << stats.dx_diff * 1e3 << ','
              << verdict.uncertainty_product << ',' << (verdict.eq8_momentum_ok ? "true" : "false")
              << ',' << (verdict.eq8_position_ok ? "true" : "false") << ','
              << (verdict.eq3_violated_as_expected ? "true" : "false") << '\n';
    }

    const auto table_path = out_dir / "sweep_table.csv";
    write_text_atomic(table_path, table.str());
    add_artifact(artifacts, table_path);

    ordered_json fits;
    fits["summary"] = ordered_json{
        {"models", models},
        {"samples_per_model", cfg.sweep.samples_per_model},
        {"all_eq8_momentum_ok", all_momentum},
        {"all_eq8_position_ok", all_position},
        {"all_eq3_violated_as_expected", all_eq3},
        {"min_uncertainty_product", min_product},
        {"min_uncertainty_product_model_index", min_product_index},
    };
    return fits;
}

} // namespace

RunResult run_experiment(const RunRequest& request) {
    RunResult result;
    try {
        ExperimentConfig cfg = request.config;
        if (request.mode_override) cfg.mode = *request.mode_override;
        const std::uint64_t seed = request.seed_override.value_or(cfg.counts.seed);
        cfg.counts.seed = seed;
        std::filesystem::create_directories(request.out_dir);

        ordered_json doc;
        doc["inputs"] = inputs_json(cfg, seed);
        ordered_json fits = ordered_json::object();
        ordered_json epr = nullptr;
        std::string report_name;

        switch (cfg.mode) {
        case RunMode::interference: {
            require_d1_mode(cfg, DetectorMode::point, "interference");
            const InterferenceFit fit =
                run_interference_leg(cfg, cfg.geometry, seed, request.out_dir, result.artifacts);
            fits["interference"] = interference_fit_json(fit, cfg.geometry, cfg.biphoton.wavelength);
            report_name = "interference_report.json";
            break;
        }
        case RunMode::image: {
            require_d1_mode(cfg, DetectorMode::bucket, "image");
            const ImageFit fit =
                run_image_leg(cfg, cfg.geometry, seed, request.out_dir, result.artifacts);
            fits["image"] = image_fit_json(fit, cfg.geometry);
            report_name = "image_report.json";
            break;
        }
        case RunMode::classical: {
            require_d1_mode(cfg, DetectorMode::point, "classical");
            fits = run_classical_mode(cfg, seed, request.out_dir, result.artifacts);
            report_name = "classical_report.json";
            break;
        }
        case RunMode::report: {
            if (cfg.epr_inline) {
                // Inline route: the six spreads are taken as given and only
                // the verdict sheet is computed.
                const InlineUncertainties& e = *cfg.epr_inline;
                epr = epr_json(epr_report(e.dk1, e.dk2, e.dk_sum, e.dx1, e.dx2, e.dx_diff));
                fits["note"] = "verdict sheet built from the [epr] inline spreads; "
                               "no simulation legs were run";
            } else {
                // Both legs run with the trigger detector in the mode each
                // scan needs, independent of the configured d1_mode.
                GeometryConfig fringe_geom = cfg.geometry;
                fringe_geom.d1_mode = DetectorMode::point;
                GeometryConfig image_geom = cfg.geometry;
                image_geom.d1_mode = DetectorMode::bucket;

                const InterferenceFit fringe_fit =
                    run_interference_leg(cfg, fringe_geom, seed, request.out_dir, result.artifacts);
                const ImageFit image_fit =
                    run_image_leg(cfg, image_geom, seed, request.out_dir, result.artifacts);

                fits["d1_note"] = "trigger detector runs in point mode for the fringe scan "
                                  "and bucket mode for the image scan";
                fits["interference"] =
                    interference_fit_json(fringe_fit, fringe_geom, cfg.biphoton.wavelength);
                fits["image"] = image_fit_json(image_fit, image_geom);

                if (cfg.classical) {
                    const CorrelationStats stats =
                        classical_stats(*cfg.classical, cfg.classical_stats_samples,
                                        derive_seed(seed, kStreamClassicalStats));
                    fits["classical_comparison"] = ordered_json{
                        {"correlation_stats", stats_json(stats)},
                        {"classical_bounds", bounds_json(verify_classical_bounds(stats))},
                    };
                }

                const double divergence =
                    cfg.biphoton.sigma_single * cfg.biphoton.wavelength / (2.0 * kPi);
                epr = epr_json(epr_report_from_fits(fringe_fit, image_fit, cfg.geometry,
                                                    cfg.biphoton.wavelength, divergence));
            }
            report_name = "report.json";
            break;
        }
        case RunMode::sweep: {
            fits = run_sweep_mode(cfg, seed, request.out_dir, result.artifacts);
            report_name = "sweep_report.json";
            break;
        }
        }

        doc["fits"] = fits;
        doc["epr_report"] = epr;
        doc["provenance"] = provenance_json(seed, cfg.raw_text);

        const auto report_path = request.out_dir / report_name;
        write_json_report(report_path, doc);
        add_artifact(result.artifacts, report_path);
        result.exit_code = 0;
    } catch (const FitError& e) {
        result.exit_code = 2;
        result.error = e.what();
    } catch (const InsufficientDataError& e) {
        result.exit_code = 2;
        result.error = e.what();
    } catch (const ShapeError& e) {
        result.exit_code = 2;
        result.error = e.what();
    } catch (const ConfigurationError& e) {
        result.exit_code = 3;
        result.error = e.what();
    } catch (const ParseError& e) {
        result.exit_code = 3;
        result.error = e.what();
    } catch (const ResolutionError& e) {
        result.exit_code = 3;
        result.error = e.what();
    } catch (const std::invalid_argument& e) {
        result.exit_code = 3;
        result.error = e.what();
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.error = e.what();
    }
    return result;
}

} // namespace ghost
