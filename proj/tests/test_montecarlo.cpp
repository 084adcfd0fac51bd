#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "phasedamp/measures.hpp"
#include "phasedamp/montecarlo.hpp"

using namespace phasedamp;
using std::numbers::pi;

namespace {

GaussianFieldSpec correlated_spec() {
    GaussianFieldSpec spec;
    spec.mean = {0.4, -0.2, 1.1};
    // rank-2 covariance with strong cross correlations
    const Mat3 a{{{0.8, 0.1, 0.0}, {-0.5, 0.6, 0.0}, {0.3, -0.9, 0.0}}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[i][k] * a[j][k];
            spec.covariance[i][j] = s;
        }
    return spec;
}

}  // namespace

TEST_CASE("phase sampling is exact for a zero covariance", "[montecarlo]") {
    GaussianFieldSpec spec;
    spec.mean = {0.3, -1.2, 2.5};
    NormalRng rng(7);
    for (int i = 0; i < 10; ++i) {
        const Vec3 omega = sample_phase_vector(spec, rng);
        CHECK(omega[0] == 0.3);
        CHECK(omega[1] == -1.2);
        CHECK(omega[2] == 2.5);
    }
}

TEST_CASE("sample mean and covariance converge to the specified moments", "[montecarlo]") {
    const GaussianFieldSpec spec = correlated_spec();
    const GaussianPhaseDistribution dist(spec);
    NormalRng rng(2024);

    const int n = 1000000;
    Vec3 mean{};
    Mat3 cov{};
    std::vector<Vec3> draws(n);
    for (int i = 0; i < n; ++i) {
        draws[i] = dist.sample(rng);
        for (int k = 0; k < 3; ++k) mean[k] += draws[i][k];
    }
    for (int k = 0; k < 3; ++k) mean[k] /= n;
    for (const Vec3& d : draws)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) cov[k][l] += (d[k] - mean[k]) * (d[l] - mean[l]);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) cov[k][l] /= n - 1;

    for (int k = 0; k < 3; ++k) {
        const double se = std::sqrt(spec.covariance[k][k] / n);
        CHECK(std::abs(mean[k] - spec.mean[k]) < 4.0 * se + 1e-12);
    }
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
            // crude stderr bound for covariance entries
            const double scale =
                std::sqrt(spec.covariance[k][k] * spec.covariance[l][l] +
                          spec.covariance[k][l] * spec.covariance[k][l]) /
                std::sqrt(static_cast<double>(n));
            CHECK(std::abs(cov[k][l] - spec.covariance[k][l]) < 4.0 * scale + 1e-12);
        }
}

TEST_CASE("factorization failure on a non-PSD covariance", "[montecarlo]") {
    GaussianFieldSpec spec;
    spec.covariance = {{{1.0, 0, 0}, {0, -0.4, 0}, {0, 0, 1.0}}};
    NormalRng rng(1);
    CHECK_THROWS_AS(sample_phase_vector(spec, rng), std::invalid_argument);
}

TEST_CASE("unitary from phases", "[montecarlo]") {
    CHECK(max_abs_diff(unitary_from_phases({0, 0, 0}), identity4()) == 0.0);

    // Omega = (0, 0, pi): flips rho_01, rho_02, rho_13, rho_23; fixes rho_03, rho_12
    const CMat4 u = unitary_from_phases({0.0, 0.0, pi});
    auto phase_between = [&](std::size_t m, std::size_t n) {
        return u(m, m) * std::conj(u(n, n));
    };
    CHECK(std::abs(phase_between(0, 1) + 1.0) < 1e-12);
    CHECK(std::abs(phase_between(0, 2) + 1.0) < 1e-12);
    CHECK(std::abs(phase_between(1, 3) + 1.0) < 1e-12);
    CHECK(std::abs(phase_between(2, 3) + 1.0) < 1e-12);
    CHECK(std::abs(phase_between(0, 3) - 1.0) < 1e-12);
    CHECK(std::abs(phase_between(1, 2) - 1.0) < 1e-12);

    NormalRng rng(5);
    GaussianFieldSpec spec = correlated_spec();
    for (int rep = 0; rep < 10; ++rep) {
        const CMat4 v = unitary_from_phases(sample_phase_vector(spec, rng));
        for (std::size_t m = 0; m < 4; ++m)
            CHECK(std::abs(std::abs(v(m, m)) - 1.0) < 1e-12);
    }
}

TEST_CASE("unitary phase differences reproduce the coherence vectors", "[montecarlo]") {
    NormalRng rng(6);
    const GaussianFieldSpec spec = correlated_spec();
    for (int rep = 0; rep < 20; ++rep) {
        const Vec3 omega = sample_phase_vector(spec, rng);
        const CMat4 u = unitary_from_phases(omega);
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t n = 0; n < 4; ++n) {
                const Vec3 c = coherence_vector(m, n);
                const cxd expected =
                    std::exp(cxd(0.0, c[0] * omega[0] + c[1] * omega[1] + c[2] * omega[2]));
                CHECK(std::abs(u(m, m) * std::conj(u(n, n)) - expected) < 1e-12);
            }
    }
}

TEST_CASE("ensemble average with zero covariance is the exact mean conjugation", "[montecarlo]") {
    GaussianFieldSpec spec;
    spec.mean = {0.7, 0.1, -1.3};
    const TwoQubitState rho =
        density_matrix(make_general_pure(PureStateParams(0.3, 0.5, 1.0, 2.0)));
    const MCEstimate est = ensemble_average(spec, rho, MCConfig{200, 99, false});

    CHECK(est.stderr_max == 0.0);
    const CMat4 exact = hadamard(damping_matrix(spec).phase_part, rho.rho);
    CHECK(max_abs_diff(est.mean, exact) == 0.0);
}

TEST_CASE("ensemble average agrees with the analytic channel", "[montecarlo]") {
    const TwoQubitState bell =
        density_matrix(make_general_pure(PureStateParams(0.5, 0.0, 0.0, 0.0)));

    GaussianFieldSpec diag = make_uncorrelated_spec({0.2, 0.05, 0.4}, {0.3, -0.1, 0.9});
    const MCEstimate est = ensemble_average(diag, bell, MCConfig{100000, 31415, false});
    const TwoQubitState expected = apply_channel(damping_matrix(diag), bell);
    CHECK(max_abs_diff(est.mean, expected.rho) < 4.0 * est.stderr_max);

    // beyond the RLU case: correlated covariance
    const GaussianFieldSpec corr = correlated_spec();
    const MCEstimate est2 = ensemble_average(corr, bell, MCConfig{100000, 31415, false});
    const TwoQubitState expected2 = apply_channel(damping_matrix(corr), bell);
    CHECK(max_abs_diff(est2.mean, expected2.rho) < 4.0 * est2.stderr_max);
}

TEST_CASE("ensemble average preserves trace and populations exactly", "[montecarlo]") {
    const TwoQubitState rho =
        density_matrix(make_general_pure(PureStateParams(0.42, 1.0, 0.3, 2.2)));
    const MCEstimate est = ensemble_average(correlated_spec(), rho, MCConfig{5000, 12, false});
    for (std::size_t m = 0; m < 4; ++m) CHECK(est.mean(m, m) == rho.rho(m, m));
    CHECK(trace(est.mean) == trace(rho.rho));
}

TEST_CASE("estimates are bitwise deterministic in the seed", "[montecarlo]") {
    const TwoQubitState rho =
        density_matrix(make_general_pure(PureStateParams(0.3, 0.2, 1.4, 0.6)));
    const GaussianFieldSpec spec = correlated_spec();

    const MCEstimate a = ensemble_average(spec, rho, MCConfig{20000, 777, false});
    const MCEstimate b = ensemble_average(spec, rho, MCConfig{20000, 777, false});
    CHECK(a.stderr_max == b.stderr_max);
    for (std::size_t i = 0; i < 16; ++i) CHECK(a.mean.e[i] == b.mean.e[i]);

    const MCEstimate c = ensemble_average(spec, rho, MCConfig{20000, 778, false});
    CHECK(max_abs_diff(a.mean, c.mean) > 0.0);

    const CMat4 d1 = channel_estimate(spec, MCConfig{20000, 555, false});
    const CMat4 d2 = channel_estimate(spec, MCConfig{20000, 555, false});
    for (std::size_t i = 0; i < 16; ++i) CHECK(d1.e[i] == d2.e[i]);
}

TEST_CASE("standard error scales as one over sqrt(N)", "[montecarlo]") {
    const TwoQubitState rho =
        density_matrix(make_general_pure(PureStateParams(0.5, 0.0, 0.7, 0.7)));
    const GaussianFieldSpec spec = make_uncorrelated_spec({0.3, 0.3, 0.3});

    const double se3 = ensemble_average(spec, rho, MCConfig{1000, 4, false}).stderr_max;
    const double se4 = ensemble_average(spec, rho, MCConfig{10000, 4, false}).stderr_max;
    const double se5 = ensemble_average(spec, rho, MCConfig{100000, 4, false}).stderr_max;

    const double root10 = std::sqrt(10.0);
    CHECK(se3 / se4 == Catch::Approx(root10).epsilon(0.2));
    CHECK(se4 / se5 == Catch::Approx(root10).epsilon(0.2));
}

TEST_CASE("channel estimate reference cases", "[montecarlo]") {
    const CMat4 ones = channel_estimate(GaussianFieldSpec{}, MCConfig{100, 3, false});
    for (const cxd& x : ones.e) CHECK(x == cxd(1.0, 0.0));

    // varsigma3^2 = ln 2: |D_01| = 0.5 within 4 stderr at N = 1e5
    const GaussianFieldSpec spec = make_uncorrelated_spec({0.0, 0.0, std::log(2.0)});
    const ChannelEstimate est = channel_estimate_detailed(spec, MCConfig{100000, 2718, false});
    CHECK(std::abs(std::abs(est.mean(0, 1)) - 0.5) < 4.0 * est.stderr[0][1]);

    // Hermitian by construction, diagonal exactly one
    for (std::size_t m = 0; m < 4; ++m) {
        CHECK(est.mean(m, m) == cxd(1.0, 0.0));
        for (std::size_t n = 0; n < 4; ++n)
            CHECK(est.mean(m, n) == std::conj(est.mean(n, m)));
    }
}

TEST_CASE("channel estimate matches damping_matrix within 4 stderr", "[montecarlo]") {
    std::mt19937_64 gen(71);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        GaussianFieldSpec spec;
        Mat3 a{};
        for (int i = 0; i < 3; ++i) {
            spec.mean[i] = pi * u(gen);
            for (int j = 0; j < 3; ++j) a[i][j] = u(gen);
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += a[i][k] * a[j][k];
                spec.covariance[i][j] = s;
            }
        const ChannelEstimate est = channel_estimate_detailed(
            spec, MCConfig{50000, static_cast<std::uint64_t>(100 + rep), false});
        const CMat4 exact = damping_matrix(spec).damping;
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t n = m + 1; n < 4; ++n)
                CHECK(std::abs(est.mean(m, n) - exact(m, n)) <
                      4.0 * est.stderr[m][n] + 1e-12);
    }
}

TEST_CASE("antithetic pairing stays deterministic and unbiased", "[montecarlo]") {
    const TwoQubitState rho =
        density_matrix(make_general_pure(PureStateParams(0.35, 0.9, 0.5, 1.7)));
    const GaussianFieldSpec spec = make_uncorrelated_spec({0.3, 0.1, 0.5}, {0.2, 0.0, 1.0});

    const MCEstimate a = ensemble_average(spec, rho, MCConfig{30000, 41, true});
    const MCEstimate b = ensemble_average(spec, rho, MCConfig{30000, 41, true});
    for (std::size_t i = 0; i < 16; ++i) CHECK(a.mean.e[i] == b.mean.e[i]);

    const TwoQubitState expected = apply_channel(damping_matrix(spec), rho);
    CHECK(max_abs_diff(a.mean, expected.rho) < 4.0 * a.stderr_max + 1e-12);
}

TEST_CASE("MCConfig validation", "[montecarlo]") {
    const MCConfig empty{0, 1, false};
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}
