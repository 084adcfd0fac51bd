#pragma once

// Entanglement and purity: the numeric oracles (Wootters concurrence,
// trace purity) and the closed-form evolution laws for RU phase damping.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phasedamp/channels.hpp"
#include "phasedamp/qmath.hpp"
#include "phasedamp/states.hpp"

namespace phasedamp {

/// A point of the concurrence-purity diagram; C in [0,1], P in [1/4, 1].
struct CPPoint {
    double concurrence;
    double purity;

    void validate() const {
        if (!(concurrence >= -kSymTol && concurrence <= 1.0 + kSymTol))
            throw std::invalid_argument("CPPoint: concurrence outside [0, 1]");
        if (!(purity >= 0.25 - kSymTol && purity <= 1.0 + kSymTol))
            throw std::invalid_argument("CPPoint: purity outside [1/4, 1]");
    }
};

/// P(rho) = tr(rho^2).
inline double purity(const TwoQubitState& state) {
    double p = 0.0;
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t n = 0; n < 4; ++n) p += std::norm(state.rho(m, n));
    return p;
}

/// Wootters concurrence, C = max{0, l1 - l2 - l3 - l4} with l_i the
/// descending square roots of the eigenvalues of
/// R = rho (sy(x)sy) rho* (sy(x)sy).
///
/// R is positive semidefinite in exact arithmetic; floating point perturbs
/// it, so eigenvalue real parts below 1e-12 are flushed to zero before the
/// square root. Rank-deficient states produce exact-zero eigenvalues whose
/// O(eps) perturbations would otherwise enter C as sqrt-amplified noise.
/// Real parts below -1e-10 or imaginary parts above 1e-8 signal a numerical
/// failure.
inline double concurrence_wootters(const TwoQubitState& state) {
    static const CMat4 sy = tensor2(pauli_y(), pauli_y());
    const CMat4 r = state.rho * sy * conj_entries(state.rho) * sy;
    const Spectrum4 spec = eig4(r);

    std::array<double, 4> lam{};
    for (std::size_t i = 0; i < 4; ++i) {
        const cxd ev = spec.values[i];
        if (std::abs(ev.imag()) > kEigenTol)
            throw std::runtime_error("concurrence_wootters: complex R eigenvalue");
        if (ev.real() < -1e-10)
            throw std::runtime_error("concurrence_wootters: negative R eigenvalue");
        lam[i] = std::sqrt(ev.real() < 1e-12 ? 0.0 : ev.real());
    }
    std::sort(lam.begin(), lam.end(), std::greater<>());
    const double c = lam[0] - lam[1] - lam[2] - lam[3];
    return std::clamp(c, 0.0, 1.0);
}

/// Purity of the noise-channel image of a pure state from its z-expectations:
/// P = sum p_i^2 + 2(p1 p3 + p2 p4) za^2 + 2(p1 p4 + p2 p3) zb^2
///       + 2(p1 p2 + p3 p4) zab^2.
/// The unitary part does not change purity, so this is also the purity under
/// the full channel.
inline double purity_analytic(const NoiseProbs& p, const ZExpectations& z) {
    return p.p1 * p.p1 + p.p2 * p.p2 + p.p3 * p.p3 + p.p4 * p.p4 +
           2.0 * (p.p1 * p.p3 + p.p2 * p.p4) * z.za * z.za +
           2.0 * (p.p1 * p.p4 + p.p2 * p.p3) * z.zb * z.zb +
           2.0 * (p.p1 * p.p2 + p.p3 * p.p4) * z.zab * z.zab;
}

/// Concurrence of a separable pure state after the full uncorrelated channel,
/// C = g(psi0) f(E) with
///   g = 4 |a1 b1 a2 b2| = sqrt(var sz^A) sqrt(var sz^B),
///   f = max{0, (p1 - p2) sin(mu3)
///              - sqrt((p3 + p4)^2 sin^2(mu3) + 4 p3 p4 cos^2(mu3))}.
/// Valid for sin(mu3) >= 0; the local mean phases mu1, mu2 do not enter.
inline double concurrence_separable_analytic(const SeparableParams& sep, const NoiseProbs& p,
                                             double mu3) {
    const double g =
        4.0 * std::abs(sep.alpha1) * std::abs(sep.beta1) * std::abs(sep.alpha2) * std::abs(sep.beta2);
    const double sn = std::sin(mu3);
    const double cs = std::cos(mu3);
    const double f = std::max(
        0.0, (p.p1 - p.p2) * sn -
                 std::sqrt((p.p3 + p.p4) * (p.p3 + p.p4) * sn * sn + 4.0 * p.p3 * p.p4 * cs * cs));
    return std::clamp(g * f, 0.0, 1.0);
}

/// Maximal concurrence reachable from a separable state with variance factor
/// g over all mean phases: C_max = max{0, g (p1 - p2 - p3 - p4)}, attained at
/// sin(mu3) = 1. The weight combination equals
/// (exp(-(s1^2+s2^2)) + exp(-(s1^2+s3^2)) + exp(-(s2^2+s3^2)) - 1) / 2.
inline double cmax_separable(const GaussianFieldSpec& spec, double g) {
    if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("cmax_separable: g outside [0, 1]");
    const NoiseProbs p = noise_probabilities(spec);
    return std::clamp(g * (p.p1 - p.p2 - p.p3 - p.p4), 0.0, 1.0);
}

/// Concurrence of a pure state after the noise channel (mu = 0),
///   C = max{0, sqrt((p1^2+p2^2)|s|^2 + 2 p1 p2 |r|^2 - 2 p1 p2 |s^2-r^2|)
///            - sqrt((p3^2+p4^2)|s|^2 + 2 p3 p4 |r|^2 + 2 p3 p4 |s^2-r^2|)}.
/// Callers wanting the full channel compose with the mean unitary or fall
/// back to the Wootters oracle.
inline double concurrence_general_noise(const StateVector4& psi, const NoiseProbs& p) {
    const SRInvariants sr = sr_invariants(psi);
    const double s2 = std::norm(sr.s);
    const double r2 = std::norm(sr.r);
    const double cross = std::abs(sr.s * sr.s - sr.r * sr.r);
    const double gain =
        (p.p1 * p.p1 + p.p2 * p.p2) * s2 + 2.0 * p.p1 * p.p2 * (r2 - cross);
    const double loss =
        (p.p3 * p.p3 + p.p4 * p.p4) * s2 + 2.0 * p.p3 * p.p4 * (r2 + cross);
    const double c = std::sqrt(std::max(gain, 0.0)) - std::sqrt(std::max(loss, 0.0));
    return std::clamp(c, 0.0, 1.0);
}

/// Single-sided phase damping: C = max{0, (1-2q) C0},
/// P = 1 - 2q(1-q)(1 - za^2).
inline CPPoint single_sided_law(double c0, double q, double za) {
    if (!(c0 >= 0.0 && c0 <= 1.0)) throw std::invalid_argument("single_sided_law: C0 outside [0, 1]");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("single_sided_law: q outside [0, 1]");
    if (!(za >= -1.0 && za <= 1.0))
        throw std::invalid_argument("single_sided_law: za outside [-1, 1]");
    return {std::max(0.0, (1.0 - 2.0 * q) * c0),
            1.0 - 2.0 * q * (1.0 - q) * (1.0 - za * za)};
}

/// Pure two-qubit dephasing of a pure state:
///   C^2 = C0^2 - 2q(1-q) (|s|^2 - |r|^2 + |s^2 - r^2|),  clamped at zero,
///   P   = 1 - 2q(1-q)(1 - zab^2).
/// The sign of the state functional is fixed so that the law specializes to
/// the general-noise formula at p = (1-q, q, 0, 0); states with s^2 <= r^2
/// and real s, r keep their concurrence (robust entanglement).
inline CPPoint two_qubit_dephasing_law(const StateVector4& psi, double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("two_qubit_dephasing_law: q outside [0, 1]");
    const SRInvariants sr = sr_invariants(psi);
    const double s2 = std::norm(sr.s);
    const double r2 = std::norm(sr.r);
    const double g = s2 - r2 + std::abs(sr.s * sr.s - sr.r * sr.r);
    const double c_sq = s2 - 2.0 * q * (1.0 - q) * g;
    const double zab = z_expectations(psi).zab;
    return {std::sqrt(std::max(c_sq, 0.0)), 1.0 - 2.0 * q * (1.0 - q) * (1.0 - zab * zab)};
}

}  // namespace phasedamp
