#pragma once

#include <cstdint>

#include "ghost/biphoton.hpp"
#include "ghost/grid.hpp"
#include "ghost/pattern.hpp"

namespace ghost {

/// Shape of the shared aim-momentum distribution P(K).
enum class MomentumDistribution { gaussian, uniform };

/// Classical two-gun source: each trial aims one particle pair with
/// opposite momenta +-K drawn from P(K) (std k_spread), launched from
/// independent positions x1, x2 ~ N(0, source_width_w). Because each gun's
/// exit pupil is only source_width_w wide, every particle carries an
/// independent diffraction kick n_j ~ N(0, noise_sigma) on top of its aim,
/// bounded below by the uncertainty floor noise_sigma >= 1/(2*source_width_w).
struct ClassicalGunModel {
    double k_spread = 0.0;       ///< 1/meters, std of the shared aim K
    double source_width_w = 0.0; ///< meters, std of each launch position
    double noise_sigma = 0.0;    ///< 1/meters, per-particle momentum noise
    MomentumDistribution aim_distribution = MomentumDistribution::gaussian;
    /// Launch both particles from the same sampled point (x2 = x1). The
    /// position correlation this buys exists only at the emission plane:
    /// it degrades under free flight as the momenta fan out.
    bool shared_emission = false;
    /// Meters of free flight between emission and the plane where
    /// classical_stats evaluates positions (0 = stats at the emission
    /// plane). Momentum converts to walk-off angle via wavenumber.
    double flight_distance = 0.0;
    double wavenumber = 0.0; ///< rad/m; must be > 0 when flight_distance > 0
};

/// Model with the noise floor saturated: noise_sigma = 1/(2*source_width_w).
ClassicalGunModel gun_model_at_noise_floor(double k_spread, double source_width_w,
                                           MomentumDistribution aim = MomentumDistribution::gaussian);

/// Throws std::invalid_argument unless k_spread >= 0, source_width_w > 0,
/// noise_sigma >= 1/(2*source_width_w), flight_distance >= 0, and a
/// positive wavenumber accompanies any nonzero flight_distance.
void validate(const ClassicalGunModel& model);

/// One sampled pair: measured momenta and emission-plane positions.
struct PairSample {
    double k1 = 0.0; ///< 1/meters
    double k2 = 0.0; ///< 1/meters
    double x1 = 0.0; ///< meters
    double x2 = 0.0; ///< meters
};

/// Deterministic draw for the given per-sample seed. The exact degenerate
/// limit k_spread == 0 && noise_sigma == 0 is accepted here (every draw
/// returns k1 = k2 = 0); any other sub-floor noise_sigma is rejected.
PairSample sample_pair(const ClassicalGunModel& model, std::uint64_t seed);

/// Positions after free flight: x -> x + (k / wavenumber) * distance.
PairSample transport_pair(const PairSample& sample, double distance, double wavenumber);

/// Sample statistics of the pair ensemble. dk*/dx* are raw standard
/// deviations of the named quantities; dk1_indep/dk2_indep are the
/// independent per-particle noise components with the shared aim removed,
/// estimated from Var(k_j) + Cov(k1, k2).
struct CorrelationStats {
    double dk1 = 0.0, dk2 = 0.0, dk_sum = 0.0;       ///< 1/meters
    double dx1 = 0.0, dx2 = 0.0, dx_diff = 0.0;      ///< meters
    double dk1_indep = 0.0, dk2_indep = 0.0;         ///< 1/meters
    std::int64_t n_samples = 0;
};

/// Stats injected from externally measured uncertainties (no covariance
/// information, so the independent components default to the raw values).
CorrelationStats injected_stats(double dk1, double dk2, double dk_sum, double dx1, double dx2,
                                double dx_diff, std::int64_t n_samples = 0);

/// Draws n_samples pairs with per-sample seeds derived from (seed, index)
/// and accumulates moments in fixed-size blocks, so the result is
/// bit-identical for any thread count. Positions are evaluated after the
/// model's flight_distance of free flight. Requires n_samples >= 1000.
CorrelationStats classical_stats(const ClassicalGunModel& model, std::int64_t n_samples,
                                 std::uint64_t seed);

/// Verdicts on the classical correlation bounds.
struct ClassicalBoundsVerdict {
    /// dk_sum >= max(dk1_indep, dk2_indep) * (1 - eps): the sum spread is
    /// never smaller than the independent per-particle diffusion feeding it.
    bool eq8_momentum_ok = false;
    /// dx_diff >= max(dx1_indep, dx2_indep) * (1 - eps), with independent
    /// launch positions the indep components equal the raw ones.
    bool eq8_position_ok = false;
    /// True when the two entanglement inequalities
    /// (dk_sum < min(dk1, dk2) and dx_diff < min(dx1, dx2)) are NOT both
    /// satisfied, as expected for any classical source.
    bool eq3_violated_as_expected = false;
    /// dk_sum * dx_diff, dimensionless; >= 1 for any gun model respecting
    /// the per-particle uncertainty floor.
    double uncertainty_product = 0.0;
    double eps_stat = 0.0; ///< statistical margin 5/sqrt(n) used above
};

/// Evaluates the verdicts. Throws std::invalid_argument on degenerate
/// (zero-variance) stats: the noise floor makes genuine samples strictly
/// dispersive, so zeros indicate injected nonsense.
ClassicalBoundsVerdict verify_classical_bounds(const CorrelationStats& stats);

/// Coincidence pattern of the classical source in the interference
/// geometry. Every sampled pair launches two wavepackets (width
/// source_width_w, tilts k1/k2); the trigger-arm packet runs to the slit
/// and is scored by the point detector, the scan-arm packet runs through
/// the imaging lens to the focal plane; the pattern is the incoherent
/// weighted average of the per-pair intensities.
///
/// The degenerate model k_spread == 0 && noise_sigma == 0 (which the
/// sampling ops reject) is accepted here only, as the coherent-source
/// control: it runs one deterministic untilted plane-wave pair, the
/// infinite-aperture limit, restoring full-visibility fringes.
Pattern classical_coincidence_pattern(const ClassicalGunModel& model, const GeometryConfig& geom,
                                      double wavelength, std::int64_t n_samples,
                                      std::uint64_t seed, const TransverseGrid& grid);

} // namespace ghost
