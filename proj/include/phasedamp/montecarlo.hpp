#pragma once

// Ensemble-average oracle: sample Gaussian phase vectors, conjugate states
// by the induced diagonal unitaries, and average. Serves as the independent
// ground truth for the analytic channel construction.
//
// Reproducibility: estimates are accumulated in a fixed number of shards
// whose generators are seeded by a splitmix64 stream derived from the
// configured seed, and merged in shard order. Results are therefore
// bitwise identical for identical (seed, config), independent of how the
// shards are scheduled.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

#include "phasedamp/channels.hpp"
#include "phasedamp/qmath.hpp"
#include "phasedamp/states.hpp"

namespace phasedamp {

struct MCConfig {
    long long samples = 10000;
    std::uint64_t seed = 0;
    bool antithetic = false;  // average each draw with its mirror 2 mu - Omega

    void validate() const {
        if (samples < 1) throw std::invalid_argument("MCConfig: samples must be >= 1");
    }
};

/// Ensemble-average estimate: the averaged state and the largest entrywise
/// standard error of the mean.
struct MCEstimate {
    CMat4 mean;
    double stderr_max;
};

/// Channel-matrix estimate with per-entry standard errors (upper triangle;
/// the matrix is Hermitian by construction and its diagonal is exactly 1).
struct ChannelEstimate {
    CMat4 mean;
    std::array<std::array<double, 4>, 4> stderr{};
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Standard-normal generator with a fixed Box-Muller transform on top of
/// mt19937_64, so sequences do not depend on the standard library's
/// distribution implementation.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : engine_(seed) {}

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;          // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

/// Sampler for Omega = mu + L xi with L L^T = Sigma, xi standard normal.
class GaussianPhaseDistribution {
public:
    explicit GaussianPhaseDistribution(const GaussianFieldSpec& spec)
        : mean_(spec.mean), factor_(spec.covariance_factor()) {
        spec.validate();
    }

    Vec3 sample(NormalRng& rng) const {
        const std::array<double, 3> xi{rng.normal(), rng.normal(), rng.normal()};
        Vec3 omega = mean_;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) omega[i] += factor_[i][j] * xi[j];
        return omega;
    }

    /// The antithetic partner 2 mu - Omega.
    Vec3 mirror(const Vec3& omega) const {
        return {2.0 * mean_[0] - omega[0], 2.0 * mean_[1] - omega[1], 2.0 * mean_[2] - omega[2]};
    }

private:
    Vec3 mean_;
    Mat3 factor_;
};

/// One Gaussian phase vector Omega = mu + L xi.
inline Vec3 sample_phase_vector(const GaussianFieldSpec& spec, NormalRng& rng) {
    return GaussianPhaseDistribution(spec).sample(rng);
}

/// Diagonal unitary of a phase realization; phase differences between
/// diagonal entries reproduce exp(i c^{mn} . Omega).
inline CMat4 unitary_from_phases(const Vec3& omega) {
    CMat4 u;
    for (std::size_t m = 0; m < 4; ++m) {
        const double phase = -0.5 * (omega[0] * kZSigns[0][m] + omega[1] * kZSigns[1][m] +
                                     omega[2] * kZSigns[2][m]);
        u(m, m) = std::exp(cxd(0.0, phase));
    }
    return u;
}

namespace detail {

// Upper-triangle coherence phases c^{mn} . Omega for m < n, in the order
// (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
inline constexpr std::array<std::pair<std::size_t, std::size_t>, 6> kUpper{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline std::array<double, 6> coherence_phases(const Vec3& omega) {
    std::array<double, 6> ph{};
    for (std::size_t k = 0; k < 6; ++k) {
        const Vec3 c = coherence_vector(kUpper[k].first, kUpper[k].second);
        ph[k] = c[0] * omega[0] + c[1] * omega[1] + c[2] * omega[2];
    }
    return ph;
}

// Shifted accumulation of the 6 independent coherences: sums of deviations
// from a fixed reference and of their squared magnitudes. Keeping the
// reference outside the sums makes the zero-variance case exact.
struct CoherenceAccumulator {
    std::array<cxd, 6> dev_sum{};
    std::array<double, 6> dev_sq_sum{};
    long long count = 0;

    void add(const std::array<cxd, 6>& value, const std::array<cxd, 6>& ref) {
        for (std::size_t k = 0; k < 6; ++k) {
            const cxd d = value[k] - ref[k];
            dev_sum[k] += d;
            dev_sq_sum[k] += std::norm(d);
        }
        ++count;
    }

    void merge(const CoherenceAccumulator& other) {
        for (std::size_t k = 0; k < 6; ++k) {
            dev_sum[k] += other.dev_sum[k];
            dev_sq_sum[k] += other.dev_sq_sum[k];
        }
        count += other.count;
    }

    cxd mean(std::size_t k, const cxd& ref) const {
        return ref + dev_sum[k] / static_cast<double>(count);
    }

    double standard_error(std::size_t k) const {
        const double n = static_cast<double>(count);
        const double var = std::max(dev_sq_sum[k] / n - std::norm(dev_sum[k] / n), 0.0);
        return std::sqrt(var / n);
    }
};

inline constexpr int kShards = 16;

// Run the sharded sampling loop; `value` maps the 6 coherence phases of one
// realization to the 6 sampled coherence entries.
template <typename ValueFn>
CoherenceAccumulator run_shards(const GaussianFieldSpec& spec, const MCConfig& cfg,
                                const std::array<cxd, 6>& ref, ValueFn&& value) {
    cfg.validate();
    const GaussianPhaseDistribution dist(spec);

    std::uint64_t seed_state = cfg.seed;
    std::array<std::uint64_t, kShards> shard_seeds{};
    for (int i = 0; i < kShards; ++i) shard_seeds[i] = splitmix64(seed_state);

    CoherenceAccumulator total;
    for (int shard = 0; shard < kShards; ++shard) {
        const long long n =
            cfg.samples / kShards + (shard < cfg.samples % kShards ? 1 : 0);
        if (n == 0) continue;
        NormalRng rng(shard_seeds[shard]);
        CoherenceAccumulator acc;
        for (long long i = 0; i < n; ++i) {
            const Vec3 omega = dist.sample(rng);
            std::array<cxd, 6> x = value(coherence_phases(omega));
            if (cfg.antithetic) {
                const std::array<cxd, 6> y = value(coherence_phases(dist.mirror(omega)));
                for (std::size_t k = 0; k < 6; ++k) x[k] = 0.5 * (x[k] + y[k]);
            }
            acc.add(x, ref);
        }
        total.merge(acc);
    }
    return total;
}

}  // namespace detail

/// Monte Carlo ensemble average of U(Omega) rho U(Omega)^dagger. The diagonal
/// of each realization is untouched, so populations and trace of the estimate
/// equal those of the input exactly. Deterministic for fixed (seed, config).
inline MCEstimate ensemble_average(const GaussianFieldSpec& spec, const TwoQubitState& state,
                                   const MCConfig& cfg) {
    std::array<cxd, 6> rho_up{}, ref{};
    Vec3 mu = spec.mean;
    for (std::size_t k = 0; k < 6; ++k) {
        const auto [m, n] = detail::kUpper[k];
        rho_up[k] = state.rho(m, n);
        const Vec3 c = coherence_vector(m, n);
        ref[k] = std::exp(cxd(0.0, c[0] * mu[0] + c[1] * mu[1] + c[2] * mu[2])) * rho_up[k];
    }

    const auto acc = detail::run_shards(
        spec, cfg, ref, [&](const std::array<double, 6>& phases) {
            std::array<cxd, 6> x;
            for (std::size_t k = 0; k < 6; ++k) x[k] = std::exp(cxd(0.0, phases[k])) * rho_up[k];
            return x;
        });

    MCEstimate est{};
    est.stderr_max = 0.0;
    for (std::size_t m = 0; m < 4; ++m) est.mean(m, m) = state.rho(m, m);
    for (std::size_t k = 0; k < 6; ++k) {
        const auto [m, n] = detail::kUpper[k];
        const cxd v = acc.mean(k, ref[k]);
        est.mean(m, n) = v;
        est.mean(n, m) = std::conj(v);
        est.stderr_max = std::max(est.stderr_max, acc.standard_error(k));
    }
    return est;
}

/// Entrywise Monte Carlo estimate of the damping matrix,
/// D_mn = << exp(i c^{mn} . Omega) >>, with per-entry standard errors.
/// The diagonal is exactly 1 and the estimate is Hermitian by pairing.
inline ChannelEstimate channel_estimate_detailed(const GaussianFieldSpec& spec,
                                                 const MCConfig& cfg) {
    std::array<cxd, 6> ref{};
    const Vec3 mu = spec.mean;
    for (std::size_t k = 0; k < 6; ++k) {
        const Vec3 c = coherence_vector(detail::kUpper[k].first, detail::kUpper[k].second);
        ref[k] = std::exp(cxd(0.0, c[0] * mu[0] + c[1] * mu[1] + c[2] * mu[2]));
    }

    const auto acc = detail::run_shards(
        spec, cfg, ref, [](const std::array<double, 6>& phases) {
            std::array<cxd, 6> x;
            for (std::size_t k = 0; k < 6; ++k) x[k] = std::exp(cxd(0.0, phases[k]));
            return x;
        });

    ChannelEstimate est;
    for (std::size_t m = 0; m < 4; ++m) est.mean(m, m) = 1.0;
    for (std::size_t k = 0; k < 6; ++k) {
        const auto [m, n] = detail::kUpper[k];
        const cxd v = acc.mean(k, ref[k]);
        est.mean(m, n) = v;
        est.mean(n, m) = std::conj(v);
        const double se = acc.standard_error(k);
        est.stderr[m][n] = se;
        est.stderr[n][m] = se;
    }
    return est;
}

/// Entrywise Monte Carlo mean of exp(i c^{mn} . Omega).
inline CMat4 channel_estimate(const GaussianFieldSpec& spec, const MCConfig& cfg) {
    return channel_estimate_detailed(spec, cfg).mean;
}

}  // namespace phasedamp
