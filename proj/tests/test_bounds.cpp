#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "phasedamp/bounds.hpp"
#include "phasedamp/measures.hpp"

using namespace phasedamp;
using std::numbers::pi;

namespace {

// Bell basis: Phi+, Phi-, Psi+, Psi-.
StateVector4 bell_state(int i) {
    const double h = 1.0 / std::sqrt(2.0);
    StateVector4 psi;
    switch (i) {
        case 0: psi.amp[0] = h; psi.amp[3] = h; break;
        case 1: psi.amp[0] = h; psi.amp[3] = -h; break;
        case 2: psi.amp[1] = h; psi.amp[2] = h; break;
        default: psi.amp[1] = h; psi.amp[2] = -h; break;
    }
    return psi;
}

// Bell-diagonal state: weight 1-q on one Bell state, q split over the next
// m-1 of them.
TwoQubitState bell_diagonal(int m, double q) {
    TwoQubitState rho;
    rho.rho = (1.0 - q) * density_matrix(bell_state(0)).rho;
    for (int i = 1; i < m; ++i)
        rho.rho = rho.rho + (q / (m - 1)) * density_matrix(bell_state(i)).rho;
    return rho;
}

}  // namespace

TEST_CASE("cm_bound reference values", "[bounds]") {
    CHECK(cm_bound(2, 0.5) == 0.0);
    CHECK(cm_bound(2, 1.0) == 1.0);
    CHECK(cm_bound(3, 3.0 / 8.0) == 0.0);
    CHECK(cm_bound(3, 1.0) == 1.0);
    CHECK(cm_bound(4, 1.0 / 3.0) == 0.0);
    CHECK(cm_bound(4, 1.0) == 1.0);
    CHECK(cm_bound(4, 7.0 / 16.0) == Catch::Approx(0.25).margin(1e-12));

    CHECK_THROWS_AS(cm_bound(2, 0.49), std::domain_error);
    CHECK_THROWS_AS(cm_bound(3, 0.3), std::domain_error);
    CHECK_THROWS_AS(cm_bound(4, 0.2), std::domain_error);
    CHECK_THROWS_AS(cm_bound(5, 0.9), std::invalid_argument);
}

TEST_CASE("werner curve equals the Bell-rank-4 bound", "[bounds]") {
    CHECK(werner_curve(1.0 / 3.0) == 0.0);
    CHECK(werner_curve(1.0) == 1.0);
    CHECK_THROWS_AS(werner_curve(0.32), std::domain_error);

    for (int i = 0; i <= 100; ++i) {
        const double p = 1.0 / 3.0 + (1.0 - 1.0 / 3.0) * i / 100.0;
        CHECK(werner_curve(p) == Catch::Approx(cm_bound(4, p)).margin(1e-12));
    }
}

TEST_CASE("bound curves are ordered and monotone", "[bounds]") {
    double prev2 = 0.0, prev3 = 0.0, prev4 = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double p = 0.5 + 0.5 * i / 200.0;
        const double c2 = cm_bound(2, p), c3 = cm_bound(3, p), c4 = cm_bound(4, p);
        CHECK(c2 <= c3 + 1e-12);
        CHECK(c3 <= c4 + 1e-12);
        CHECK(c2 >= prev2);
        CHECK(c3 >= prev3);
        CHECK(c4 >= prev4);
        prev2 = c2;
        prev3 = c3;
        prev4 = c4;
    }
}

TEST_CASE("each cm_bound is attained by equal-weight Bell-diagonal states", "[bounds]") {
    for (int m : {2, 3, 4}) {
        for (int i = 0; i <= 40; ++i) {
            const double q = 0.5 * i / 40.0;
            const TwoQubitState rho = bell_diagonal(m, q);
            const double c = concurrence_wootters(rho);
            const double p = purity(rho);
            CHECK(c == Catch::Approx(cm_bound(m, p)).margin(1e-10));
        }
    }
}

TEST_CASE("pure2q separable bound", "[bounds]") {
    // za = zb = 0 reduces to the dephasing curve sqrt(2P - 1)
    for (double p : {0.5, 0.6, 0.8, 1.0})
        CHECK(pure2q_separable_bound(p, 0.0, 0.0) ==
              Catch::Approx(std::sqrt(2.0 * p - 1.0)).margin(1e-12));

    // fully polarized qubits cannot entangle
    CHECK(pure2q_separable_bound(1.0, 1.0, 1.0) == 0.0);
    CHECK(pure2q_separable_bound(1.0, 1.0, -1.0) == 0.0);

    CHECK_THROWS_AS(pure2q_separable_bound(0.4, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(pure2q_separable_bound(0.9, 1.4, 0.0), std::invalid_argument);
}

TEST_CASE("pure2q separable bound is attained along a varsigma3 sweep", "[bounds]") {
    std::mt19937_64 gen(61);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int rep = 0; rep < 10; ++rep) {
        const double za = u(gen), zb = u(gen);
        // separable state with the prescribed polarizations (real amplitudes)
        const SeparableParams sep(std::sqrt((1.0 + za) / 2.0), std::sqrt((1.0 - za) / 2.0),
                                  std::sqrt((1.0 + zb) / 2.0), std::sqrt((1.0 - zb) / 2.0));
        const TwoQubitState rho0 = density_matrix(make_separable(sep));
        for (int i = 0; i <= 10; ++i) {
            const double vs3 = 0.15 * i;
            GaussianFieldSpec spec = make_uncorrelated_spec({0.0, 0.0, vs3});
            spec.mean = {0.0, 0.0, pi / 2.0};
            const TwoQubitState out = apply_channel(damping_matrix(spec), rho0);
            const double c = concurrence_wootters(out);
            const double p = purity(out);
            CHECK(c == Catch::Approx(pure2q_separable_bound(p, za, zb)).margin(1e-8));
        }
    }
}

TEST_CASE("cmax surface slices", "[bounds]") {
    for (double p : {0.5, 0.7, 0.9})
        CHECK(cmax_surface(p, 0.0) == Catch::Approx(std::sqrt(2.0 * p - 1.0)).margin(1e-12));
    CHECK(cmax_surface(1.0, 1.0) == 0.0);
    CHECK(cmax_surface(1.0, -1.0) == 0.0);

    std::mt19937_64 gen(62);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int rep = 0; rep < 100; ++rep) {
        const double z = u(gen);
        const double z2 = z * z;
        std::uniform_real_distribution<double> up(0.5 * (1.0 + z2 * z2), 1.0);
        const double p = up(gen);
        CHECK(cmax_surface(p, z) == Catch::Approx(pure2q_separable_bound(p, z, z)).margin(1e-12));
    }

    CHECK_THROWS_AS(cmax_surface(0.5, 0.9), std::domain_error);
}

TEST_CASE("uncorrelated region inequality", "[bounds]") {
    CHECK(uncorrelated_region_check(1.0, 1.0));        // 3 <= 3
    CHECK_FALSE(uncorrelated_region_check(0.5, 0.4));  // 1.75 > 1.2

    // points on the Werner curve satisfy it with equality
    for (int i = 0; i <= 50; ++i) {
        const double p = 1.0 / 3.0 + (2.0 / 3.0) * i / 50.0;
        const double c = werner_curve(p);
        CHECK(uncorrelated_region_check(c, p));
        CHECK(c * c + c + 1.0 == Catch::Approx(3.0 * p).margin(1e-9));
    }
}

TEST_CASE("robust threshold reference values", "[bounds]") {
    CHECK(robust_threshold(0.0, 0.0) == 1.0);
    CHECK(robust_threshold(pi / 2.0, 0.0) == 1.0);  // cos cos = -1 case
    CHECK(robust_threshold(3.0 * pi / 16.0, pi / 8.0) == Catch::Approx(0.5142).margin(5e-4));
}

TEST_CASE("robust threshold separates constant from decaying concurrence", "[bounds]") {
    const double t1 = 3.0 * pi / 16.0, t2 = pi / 8.0;
    const double thr = robust_threshold(t1, t2);

    auto state_for = [&](double c0) {
        const double a = 0.5 * (1.0 - std::sqrt(1.0 - c0 * c0));
        return make_general_pure(PureStateParams(a, 0.0, 2.0 * t1, 2.0 * t2));
    };

    const StateVector4 below = state_for(thr - 0.01);
    const double c_below = pure_concurrence(below);
    for (double q : {0.1, 0.25, 0.4})
        CHECK(two_qubit_dephasing_law(below, q).concurrence ==
              Catch::Approx(c_below).margin(1e-10));

    const StateVector4 above = state_for(thr + 0.01);
    const double c_above = pure_concurrence(above);
    CHECK(two_qubit_dephasing_law(above, 0.4).concurrence < c_above - 1e-6);
}

TEST_CASE("robust margin changes sign at most once on the bisection bracket", "[bounds]") {
    std::mt19937_64 gen(63);
    std::uniform_real_distribution<double> u(0.0, pi);
    for (int rep = 0; rep < 200; ++rep) {
        const double t1 = u(gen), t2 = u(gen);
        int changes = 0;
        double prev = 0.0;
        bool have_prev = false;
        for (int i = 0; i <= 200; ++i) {
            const double a = 0.5 * i / 200.0;
            const StateVector4 psi =
                make_general_pure(PureStateParams(a, 0.0, 2.0 * t1, 2.0 * t2));
            const auto [s, r] = sr_invariants(psi);
            const double margin = (r * r - s * s).real();
            if (have_prev && ((margin < 0.0) != (prev < 0.0))) ++changes;
            prev = margin;
            have_prev = true;
        }
        CHECK(changes <= 1);
    }
}

TEST_CASE("single-sided purity floor", "[bounds]") {
    CHECK(purity_floor_single_sided(1.0) == 0.5);
    CHECK(purity_floor_single_sided(0.0) == 1.0);
    CHECK(purity_floor_single_sided(0.6) == Catch::Approx(0.82).margin(1e-15));
    CHECK_THROWS_AS(purity_floor_single_sided(-0.2), std::invalid_argument);

    // worst case cos^2(theta1) = 1: the trajectory hits C = 0 exactly at P_<
    for (double c0 : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        const double za = std::sqrt(1.0 - c0 * c0);
        const CPPoint end = single_sided_law(c0, 0.5, za);
        CHECK(end.concurrence == 0.0);
        CHECK(end.purity == Catch::Approx(purity_floor_single_sided(c0)).margin(1e-10));
        // and C(P) = sqrt(C0^2 + 2(P-1)) vanishes there
        CHECK(c0 * c0 + 2.0 * (end.purity - 1.0) == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("bound curve descriptors expose domains", "[bounds]") {
    const BoundCurve c2{BoundCurve::Kind::BellRank2};
    const BoundCurve c3{BoundCurve::Kind::BellRank3};
    const BoundCurve werner{BoundCurve::Kind::Werner};
    CHECK(c2.p_min() == 0.5);
    CHECK(c3.p_min() == 0.375);
    CHECK(werner.p_min() == Catch::Approx(1.0 / 3.0).margin(1e-15));
    CHECK(c2.value(c2.p_min()) == 0.0);
    CHECK(c3.value(c3.p_min()) == 0.0);

    BoundCurve surf{BoundCurve::Kind::Surface};
    surf.z = 0.5;
    CHECK(surf.p_min() == Catch::Approx(0.5 * (1.0 + 0.0625)).margin(1e-15));
    CHECK(surf.value(surf.p_min()) == Catch::Approx(0.0).margin(1e-7));

    // monotone non-decreasing over the domain
    for (const BoundCurve& curve : {c2, c3, werner, surf}) {
        double prev = -1.0;
        for (int i = 0; i <= 100; ++i) {
            const double p = curve.p_min() + (1.0 - curve.p_min()) * i / 100.0;
            const double v = curve.value(p);
            CHECK(v >= prev - 1e-12);
            CHECK((v >= 0.0 && v <= 1.0));
            prev = v;
        }
    }
}
