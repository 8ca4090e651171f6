#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "ghost/classical.hpp"
#include "ghost/fit.hpp"
#include "ghost/grid.hpp"
#include "ghost/pattern.hpp"
#include "ghost/rng.hpp"

using namespace ghost;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kWavelength = 702.2e-9;
constexpr double kWavenumber = 2.0 * kPi / kWavelength;

GeometryConfig reference_geometry() {
    GeometryConfig g;
    g.slit.slit_width_a = 0.165e-3;
    g.slit.slit_separation_d = 0.400e-3;
    g.distance_slit_to_crystal = 0.325;
    g.distance_crystal_to_lens = 0.465;
    g.lens_to_image_plane = 1.42;
    g.f_imaging = 0.51;
    g.f_collection = 0.50;
    return g;
}
} // namespace

TEST_CASE("noise-floor factory saturates the per-particle uncertainty bound") {
    const ClassicalGunModel m = gun_model_at_noise_floor(10.0e3, 0.05e-3);
    CHECK(m.k_spread == 10.0e3);
    CHECK(m.source_width_w == 0.05e-3);
    CHECK(m.noise_sigma == doctest::Approx(1.0 / (2.0 * 0.05e-3)).epsilon(1e-12));
    CHECK(m.aim_distribution == MomentumDistribution::gaussian);
    CHECK_NOTHROW(validate(m));
}

TEST_CASE("gun validation enforces the uncertainty floor and flight prerequisites") {
    ClassicalGunModel m = gun_model_at_noise_floor(10.0e3, 0.05e-3);
    m.k_spread = -1.0;
    CHECK_THROWS_AS(validate(m), std::invalid_argument);

    m = gun_model_at_noise_floor(10.0e3, 0.05e-3);
    m.source_width_w = 0.0;
    CHECK_THROWS_AS(validate(m), std::invalid_argument);

    m = gun_model_at_noise_floor(10.0e3, 0.05e-3);
    m.noise_sigma *= 0.9; // below 1/(2w)
    CHECK_THROWS_AS(validate(m), std::invalid_argument);

    m = gun_model_at_noise_floor(10.0e3, 0.05e-3);
    m.flight_distance = 0.5; // flight needs a wavenumber
    CHECK_THROWS_AS(validate(m), std::invalid_argument);
    m.wavenumber = kWavenumber;
    CHECK_NOTHROW(validate(m));
}

TEST_CASE("pair draws are seed-deterministic") {
    const ClassicalGunModel m = gun_model_at_noise_floor(10.0e3, 0.05e-3);
    const PairSample a = sample_pair(m, 1234);
    const PairSample b = sample_pair(m, 1234);
    CHECK(a.k1 == b.k1);
    CHECK(a.k2 == b.k2);
    CHECK(a.x1 == b.x1);
    CHECK(a.x2 == b.x2);
    const PairSample c = sample_pair(m, 1235);
    CHECK(a.k1 != c.k1);
}

TEST_CASE("the exact coherent limit is the only accepted sub-floor draw") {
    ClassicalGunModel m = gun_model_at_noise_floor(0.0, 0.05e-3);
    m.noise_sigma = 0.0;
    const PairSample s = sample_pair(m, 99);
    CHECK(s.k1 == 0.0);
    CHECK(s.k2 == 0.0);

    m.noise_sigma = 0.5 / (2.0 * m.source_width_w); // positive but sub-floor
    CHECK_THROWS_AS(sample_pair(m, 99), std::invalid_argument);
}

TEST_CASE("shared emission reuses the launch point without shifting the stream") {
    ClassicalGunModel independent = gun_model_at_noise_floor(10.0e3, 0.05e-3);
    ClassicalGunModel shared = independent;
    shared.shared_emission = true;
    const PairSample a = sample_pair(independent, 42);
    const PairSample b = sample_pair(shared, 42);
    CHECK(b.x2 == b.x1);
    CHECK(a.x2 != a.x1);
    // Only the second launch position responds to the flag.
    CHECK(a.k1 == b.k1);
    CHECK(a.k2 == b.k2);
    CHECK(a.x1 == b.x1);
}

TEST_CASE("free flight shifts positions by the walk-off angle") {
    PairSample s;
    s.k1 = 1.0e4;
    s.k2 = -2.0e4;
    s.x1 = 0.1e-3;
    s.x2 = 0.2e-3;
    const PairSample same = transport_pair(s, 0.0, kWavenumber);
    CHECK(same.x1 == s.x1);
    CHECK(same.x2 == s.x2);
    const PairSample moved = transport_pair(s, 0.5, kWavenumber);
    CHECK(moved.x1 == doctest::Approx(s.x1 + s.k1 / kWavenumber * 0.5).epsilon(1e-14));
    CHECK(moved.x2 == doctest::Approx(s.x2 + s.k2 / kWavenumber * 0.5).epsilon(1e-14));
    CHECK(moved.k1 == s.k1);
    CHECK(moved.k2 == s.k2);
}

TEST_CASE("sampled ensemble moments match the gun construction") {
    const double K = 10.0e3, w = 0.05e-3;
    const double noise = 1.0 / (2.0 * w); // 1e4
    for (const MomentumDistribution aim :
         {MomentumDistribution::gaussian, MomentumDistribution::uniform}) {
        const ClassicalGunModel m = gun_model_at_noise_floor(K, w, aim);
        const CorrelationStats stats = classical_stats(m, 1000000, 7);
        CHECK(stats.n_samples == 1000000);
        const double dk_single = std::hypot(K, noise);
        CHECK(stats.dk1 == doctest::Approx(dk_single).epsilon(5e-3));
        CHECK(stats.dk2 == doctest::Approx(dk_single).epsilon(5e-3));
        // The aims cancel in the sum, leaving only the two noise kicks.
        CHECK(stats.dk_sum == doctest::Approx(std::sqrt(2.0) * noise).epsilon(5e-3));
        CHECK(stats.dx1 == doctest::Approx(w).epsilon(5e-3));
        CHECK(stats.dx_diff == doctest::Approx(std::sqrt(2.0) * w).epsilon(5e-3));
        CHECK(stats.dk1_indep == doctest::Approx(noise).epsilon(2e-2));
        CHECK(stats.dk2_indep == doctest::Approx(noise).epsilon(2e-2));
    }
}

TEST_CASE("ensemble statistics are bit-reproducible and need enough samples") {
    const ClassicalGunModel m = gun_model_at_noise_floor(10.0e3, 0.05e-3);
    const CorrelationStats a = classical_stats(m, 2000, 5);
    const CorrelationStats b = classical_stats(m, 2000, 5);
    CHECK(a.dk_sum == b.dk_sum);
    CHECK(a.dx_diff == b.dx_diff);
    CHECK_THROWS_AS(classical_stats(m, 999, 5), std::invalid_argument);
}

TEST_CASE("a gun at the noise floor respects both correlation bounds") {
    const ClassicalGunModel m = gun_model_at_noise_floor(10.0e3, 0.05e-3);
    const CorrelationStats stats = classical_stats(m, 200000, 11);
    const ClassicalBoundsVerdict v = verify_classical_bounds(stats);
    CHECK(v.eq8_momentum_ok);
    CHECK(v.eq8_position_ok);
    CHECK(v.eq3_violated_as_expected);
    // Saturating the floor puts the product right at 1: 2 * noise * w.
    CHECK(v.uncertainty_product == doctest::Approx(1.0).epsilon(0.05));
    CHECK(v.uncertainty_product > 0.9);
    CHECK(v.eps_stat == doctest::Approx(5.0 / std::sqrt(200000.0)).epsilon(1e-12));
}

TEST_CASE("zero-variance statistics are rejected as nonsense") {
    CHECK_THROWS_AS(verify_classical_bounds(injected_stats(0, 0, 0, 0, 0, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_classical_bounds(injected_stats(1e4, 1e4, 1e4, 1e-4, 1e-4, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("measured two-photon spreads fail every classical bound") {
    // Spreads of the entangled source: tight sum momentum and tight
    // position difference against broad singles.
    const CorrelationStats stats =
        injected_stats(23.3e3, 23.3e3, 2.5e3, 0.165e-3, 0.165e-3, 0.11e-3, 1000000);
    const ClassicalBoundsVerdict v = verify_classical_bounds(stats);
    CHECK_FALSE(v.eq8_momentum_ok);
    CHECK_FALSE(v.eq8_position_ok);
    CHECK_FALSE(v.eq3_violated_as_expected);
    CHECK(v.uncertainty_product == doctest::Approx(0.275).epsilon(1e-12));
    CHECK(v.uncertainty_product < 1.0);
}

TEST_CASE("shared emission degenerates at the source and decays in flight") {
    ClassicalGunModel m = gun_model_at_noise_floor(23.3e3, 0.05e-3);
    m.shared_emission = true;
    m.wavenumber = kWavenumber;

    // At the emission plane the position difference has zero variance.
    m.flight_distance = 0.0;
    CHECK_THROWS_AS(verify_classical_bounds(classical_stats(m, 100000, 3)),
                    std::invalid_argument);

    // Close to the source the gun mimics both entanglement signatures:
    // the bounds verdict honestly reports that (the mimicry window is why
    // a small product is necessary but not sufficient evidence).
    m.flight_distance = 0.002;
    const CorrelationStats near = classical_stats(m, 100000, 3);
    const ClassicalBoundsVerdict v_near = verify_classical_bounds(near);
    CHECK_FALSE(v_near.eq8_position_ok);
    CHECK_FALSE(v_near.eq3_violated_as_expected);

    // The correlation fans out with flight; downstream the bounds hold.
    m.flight_distance = 0.10;
    const CorrelationStats mid = classical_stats(m, 100000, 3);
    CHECK(mid.dx_diff > near.dx_diff * 10.0);

    m.flight_distance = 0.50;
    const CorrelationStats far = classical_stats(m, 100000, 3);
    CHECK(far.dx_diff > mid.dx_diff * 2.0);
    const ClassicalBoundsVerdict v_far = verify_classical_bounds(far);
    CHECK(v_far.eq8_momentum_ok);
    CHECK(v_far.eq8_position_ok);
    CHECK(v_far.eq3_violated_as_expected);
}

TEST_CASE("random floor-respecting guns never fake entanglement") {
    SplitMix64 rng(2026);
    for (int i = 0; i < 10; ++i) {
        const double k_spread = 1.0e3 * std::exp(rng.uniform() * std::log(100.0));
        const double w = 1.0e-5 + rng.uniform() * 1.9e-4;
        const MomentumDistribution aim =
            (i % 2 == 0) ? MomentumDistribution::gaussian : MomentumDistribution::uniform;
        ClassicalGunModel m = gun_model_at_noise_floor(k_spread, w, aim);
        m.noise_sigma *= 1.0 + 2.0 * rng.uniform(); // anywhere at or above the floor
        const CorrelationStats stats = classical_stats(m, 10000, derive_seed(77, i));
        const ClassicalBoundsVerdict v = verify_classical_bounds(stats);
        CHECK(v.eq8_momentum_ok);
        CHECK(v.eq8_position_ok);
        CHECK(v.eq3_violated_as_expected);
        CHECK(v.uncertainty_product > 0.9);
    }
}

TEST_CASE("momentum-anticorrelated guns cannot light up the fringe pattern") {
    const ClassicalGunModel m = gun_model_at_noise_floor(23.3e3, 0.05e-3);
    const GeometryConfig geom = reference_geometry();
    const TransverseGrid grid = make_grid(8192, 8192 * 5.0e-6);
    const Pattern p = clip_window(
        classical_coincidence_pattern(m, geom, kWavelength, 1000, 21, grid), 2.5e-3);
    InterferenceFitOptions options;
    options.fix_slit_geometry = true;
    const InterferenceFit fit = fit_interference(p, geom, kWavelength, options);
    CHECK(fit.visibility_V < 0.05);
}

TEST_CASE("the coherent control restores full-visibility fringes") {
    ClassicalGunModel m;
    m.k_spread = 0.0;
    m.noise_sigma = 0.0;
    m.source_width_w = 0.05e-3;
    const GeometryConfig geom = reference_geometry();
    const TransverseGrid grid = make_grid(8192, 8192 * 5.0e-6);
    const Pattern p = clip_window(
        classical_coincidence_pattern(m, geom, kWavelength, 1, 21, grid), 2.5e-3);
    const InterferenceFit fit = fit_interference(p, geom, kWavelength);
    CHECK(fit.visibility_V > 0.9);
}
