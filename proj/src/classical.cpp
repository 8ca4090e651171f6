#include "ghost/classical.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ghost/field.hpp"
#include "ghost/parallel.hpp"
#include "ghost/propagation.hpp"
#include "ghost/rng.hpp"

namespace ghost {

ClassicalGunModel gun_model_at_noise_floor(double k_spread, double source_width_w,
                                           MomentumDistribution aim) {
    if (!(source_width_w > 0.0))
        throw std::invalid_argument("gun model: source width must be positive");
    return ClassicalGunModel{k_spread, source_width_w, 1.0 / (2.0 * source_width_w), aim};
}

void validate(const ClassicalGunModel& model) {
    if (!(model.k_spread >= 0.0))
        throw std::invalid_argument("gun model: k_spread must be >= 0");
    if (!(model.source_width_w > 0.0))
        throw std::invalid_argument("gun model: source width must be positive");
    const double floor = 1.0 / (2.0 * model.source_width_w);
    if (!(model.noise_sigma >= floor * (1.0 - 1e-12)))
        throw std::invalid_argument(
            "gun model: noise_sigma violates the per-particle uncertainty floor 1/(2w)");
    if (!(model.flight_distance >= 0.0))
        throw std::invalid_argument("gun model: flight_distance must be >= 0");
    if (model.flight_distance > 0.0 && !(model.wavenumber > 0.0))
        throw std::invalid_argument(
            "gun model: a positive wavenumber is required when flight_distance > 0");
}

PairSample sample_pair(const ClassicalGunModel& model, std::uint64_t seed) {
    if (model.k_spread == 0.0 && model.noise_sigma == 0.0) {
        // Exact coherent limit: both momentum distributions collapse to 0,
        // which no finite noise floor reaches but the limit itself is well
        // defined. Only the launch positions keep their spread.
        if (!(model.source_width_w > 0.0))
            throw std::invalid_argument("gun model: source width must be positive");
    } else {
        validate(model);
    }
    SplitMix64 rng(seed);
    double aim = 0.0;
    if (model.aim_distribution == MomentumDistribution::gaussian) {
        aim = model.k_spread * normal_deviate(rng);
    } else {
        // Uniform with matching standard deviation: half width sqrt(3)*std.
        aim = model.k_spread * std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    }
    PairSample s;
    s.k1 = aim + model.noise_sigma * normal_deviate(rng);
    s.k2 = -aim + model.noise_sigma * normal_deviate(rng);
    s.x1 = model.source_width_w * normal_deviate(rng);
    // The second position deviate is always drawn so every sample consumes
    // the same stream length whether or not the emission point is shared.
    const double x2_own = model.source_width_w * normal_deviate(rng);
    s.x2 = model.shared_emission ? s.x1 : x2_own;
    return s;
}

PairSample transport_pair(const PairSample& sample, double distance, double wavenumber) {
    if (!(distance >= 0.0))
        throw std::invalid_argument("transport_pair: distance must be >= 0");
    if (distance == 0.0) return sample;
    if (!(wavenumber > 0.0))
        throw std::invalid_argument("transport_pair: wavenumber must be positive");
    PairSample t = sample;
    t.x1 += sample.k1 / wavenumber * distance;
    t.x2 += sample.k2 / wavenumber * distance;
    return t;
}

CorrelationStats injected_stats(double dk1, double dk2, double dk_sum, double dx1, double dx2,
                                double dx_diff, std::int64_t n_samples) {
    CorrelationStats s;
    s.dk1 = dk1;
    s.dk2 = dk2;
    s.dk_sum = dk_sum;
    s.dx1 = dx1;
    s.dx2 = dx2;
    s.dx_diff = dx_diff;
    s.dk1_indep = dk1;
    s.dk2_indep = dk2;
    s.n_samples = n_samples;
    return s;
}

CorrelationStats classical_stats(const ClassicalGunModel& model, std::int64_t n_samples,
                                 std::uint64_t seed) {
    validate(model);
    if (n_samples < 1000)
        throw std::invalid_argument("classical_stats: need at least 1000 samples");

    // Per-block raw moments, accumulated in index order afterwards so the
    // floating-point sum never depends on the thread count.
    struct Moments {
        double k1 = 0, k2 = 0, x1 = 0, x2 = 0;
        double k1k1 = 0, k2k2 = 0, k1k2 = 0;
        double x1x1 = 0, x2x2 = 0, x1x2 = 0;
    };
    const std::int64_t block = 4096;
    const std::int64_t n_blocks = (n_samples + block - 1) / block;
    std::vector<Moments> partial(static_cast<std::size_t>(n_blocks));

    parallel_blocks(n_samples, block, [&](std::int64_t b, std::int64_t begin, std::int64_t end) {
        Moments m;
        for (std::int64_t i = begin; i < end; ++i) {
            const PairSample p =
                transport_pair(sample_pair(model, derive_seed(seed, static_cast<std::uint64_t>(i))),
                               model.flight_distance, model.wavenumber);
            m.k1 += p.k1;
            m.k2 += p.k2;
            m.x1 += p.x1;
            m.x2 += p.x2;
            m.k1k1 += p.k1 * p.k1;
            m.k2k2 += p.k2 * p.k2;
            m.k1k2 += p.k1 * p.k2;
            m.x1x1 += p.x1 * p.x1;
            m.x2x2 += p.x2 * p.x2;
            m.x1x2 += p.x1 * p.x2;
        }
        partial[static_cast<std::size_t>(b)] = m;
    });

    Moments t;
    for (const Moments& m : partial) {
        t.k1 += m.k1;
        t.k2 += m.k2;
        t.x1 += m.x1;
        t.x2 += m.x2;
        t.k1k1 += m.k1k1;
        t.k2k2 += m.k2k2;
        t.k1k2 += m.k1k2;
        t.x1x1 += m.x1x1;
        t.x2x2 += m.x2x2;
        t.x1x2 += m.x1x2;
    }

    const double n = static_cast<double>(n_samples);
    auto var = [n](double sum_sq, double sum) { return (sum_sq - sum * sum / n) / (n - 1.0); };
    auto cov = [n](double sum_xy, double sum_x, double sum_y) {
        return (sum_xy - sum_x * sum_y / n) / (n - 1.0);
    };

    const double var_k1 = var(t.k1k1, t.k1);
    const double var_k2 = var(t.k2k2, t.k2);
    const double cov_k = cov(t.k1k2, t.k1, t.k2);
    const double var_x1 = var(t.x1x1, t.x1);
    const double var_x2 = var(t.x2x2, t.x2);
    const double cov_x = cov(t.x1x2, t.x1, t.x2);

    CorrelationStats s;
    s.dk1 = std::sqrt(var_k1);
    s.dk2 = std::sqrt(var_k2);
    s.dk_sum = std::sqrt(std::max(0.0, var_k1 + var_k2 + 2.0 * cov_k));
    s.dx1 = std::sqrt(var_x1);
    s.dx2 = std::sqrt(var_x2);
    s.dx_diff = std::sqrt(std::max(0.0, var_x1 + var_x2 - 2.0 * cov_x));
    // Shared anticorrelated aim contributes -Var(K) to Cov(k1,k2); adding
    // the covariance back strips it, leaving the per-particle noise.
    s.dk1_indep = std::sqrt(std::max(0.0, var_k1 + cov_k));
    s.dk2_indep = std::sqrt(std::max(0.0, var_k2 + cov_k));
    s.n_samples = n_samples;
    return s;
}

ClassicalBoundsVerdict verify_classical_bounds(const CorrelationStats& stats) {
    if (stats.n_samples < 0)
        throw std::invalid_argument("verify_classical_bounds: negative sample count");
    const double all[] = {stats.dk1, stats.dk2, stats.dk_sum,
                          stats.dx1, stats.dx2, stats.dx_diff};
    for (double v : all)
        if (!(v > 0.0))
            throw std::invalid_argument(
                "verify_classical_bounds: degenerate zero-variance stats rejected");

    ClassicalBoundsVerdict v;
    v.eps_stat = stats.n_samples > 0 ? 5.0 / std::sqrt(static_cast<double>(stats.n_samples)) : 0.0;
    const double margin = 1.0 - v.eps_stat;
    v.eq8_momentum_ok = stats.dk_sum >= std::max(stats.dk1_indep, stats.dk2_indep) * margin;
    v.eq8_position_ok = stats.dx_diff >= std::max(stats.dx1, stats.dx2) * margin;
    const bool epr_momentum = stats.dk_sum < std::min(stats.dk1, stats.dk2);
    const bool epr_position = stats.dx_diff < std::min(stats.dx1, stats.dx2);
    v.eq3_violated_as_expected = !(epr_momentum && epr_position);
    v.uncertainty_product = stats.dk_sum * stats.dx_diff;
    return v;
}

namespace {

/// Gaussian wavepacket of intensity-std w, centered at x0, tilted by k_t.
ComplexField launch_packet(const TransverseGrid& grid, double wavelength, double w, double x0,
                           double k_t) {
    ComplexField f = make_field(grid, wavelength);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.position(i);
        const double env = std::exp(-(x - x0) * (x - x0) / (4.0 * w * w));
        const double ph = k_t * x;
        f.values[static_cast<std::size_t>(i)] =
            env * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return f;
}

} // namespace

Pattern classical_coincidence_pattern(const ClassicalGunModel& model, const GeometryConfig& geom,
                                      double wavelength, std::int64_t n_samples,
                                      std::uint64_t seed, const TransverseGrid& grid) {
    validate(geom);
    if (!(wavelength > 0.0))
        throw std::invalid_argument("classical pattern: wavelength must be positive");

    const std::vector<double> mask = double_slit_mask(grid, geom.slit);
    const bool coherent_control = (model.k_spread == 0.0 && model.noise_sigma == 0.0);
    if (!coherent_control) {
        validate(model);
        if (n_samples < 1)
            throw std::invalid_argument("classical pattern: need at least one sample");
    }

    auto run_pair = [&](const PairSample& pair, std::vector<double>& accum) {
        // Trigger arm: packet to the slit plane, masked, scored by the
        // on-axis point detector in the collection lens's focal plane
        // (the q = 0 Fourier component of the slit-plane field).
        ComplexField sig =
            launch_packet(grid, wavelength, model.source_width_w, pair.x1, pair.k1);
        sig = fresnel_propagate(sig, geom.distance_slit_to_crystal);
        std::complex<double> amp{0.0, 0.0};
        for (int i = 0; i < grid.n; ++i)
            amp += sig.values[static_cast<std::size_t>(i)] * mask[static_cast<std::size_t>(i)];
        const double weight = std::norm(amp);
        if (weight == 0.0)
            return;

        // Scan arm: packet through the imaging lens to the focal plane.
        ComplexField idl =
            launch_packet(grid, wavelength, model.source_width_w, pair.x2, pair.k2);
        idl = fresnel_propagate(idl, geom.distance_crystal_to_lens);
        idl = thin_lens(idl, geom.f_imaging);
        idl = fresnel_propagate(idl, geom.f_imaging);
        for (int i = 0; i < grid.n; ++i)
            accum[static_cast<std::size_t>(i)] +=
                weight * std::norm(idl.values[static_cast<std::size_t>(i)]);
    };

    std::vector<double> rates(static_cast<std::size_t>(grid.n), 0.0);

    if (coherent_control) {
        // One deterministic plane-wave sample: with zero aim spread and
        // zero diffraction noise the pair is a single mutually coherent
        // wave, so the scan detector sees the slit's coherent diffraction
        // pattern routed through the imaging arm at full visibility.
        Pattern p;
        p.label = DetectorPlane::focal;
        p.positions = grid.positions();
        ComplexField wave = make_field(grid, wavelength);
        for (int i = 0; i < grid.n; ++i)
            wave.values[static_cast<std::size_t>(i)] = mask[static_cast<std::size_t>(i)];
        wave = fresnel_propagate(wave, geom.distance_slit_to_crystal);
        wave = fresnel_propagate(wave, geom.distance_crystal_to_lens);
        wave = thin_lens(wave, geom.f_imaging);
        wave = fresnel_propagate(wave, geom.f_imaging);
        p.rates.reserve(p.positions.size());
        for (const auto& v : wave.values)
            p.rates.push_back(std::norm(v));
        normalize_peak(p);
        return p;
    }

    // Fixed-size blocks keep the accumulation order independent of the
    // worker count.
    const std::int64_t block = 256;
    const std::int64_t n_blocks = (n_samples + block - 1) / block;
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(n_blocks));
    parallel_blocks(n_samples, block, [&](std::int64_t b, std::int64_t begin, std::int64_t end) {
        std::vector<double> acc(static_cast<std::size_t>(grid.n), 0.0);
        for (std::int64_t i = begin; i < end; ++i) {
            const PairSample pair =
                sample_pair(model, derive_seed(seed, static_cast<std::uint64_t>(i)));
            run_pair(pair, acc);
        }
        partial[static_cast<std::size_t>(b)] = std::move(acc);
    });
    for (const auto& acc : partial)
        for (std::size_t i = 0; i < rates.size(); ++i)
            rates[i] += acc[i];

    Pattern p;
    p.label = DetectorPlane::focal;
    p.positions = grid.positions();
    p.rates = std::move(rates);
    normalize_peak(p);
    return p;
}

} // namespace ghost
