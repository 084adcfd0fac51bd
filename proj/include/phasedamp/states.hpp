#pragma once

// Two-qubit state construction and characterization. The computational
// basis order is {|00>, |01>, |10>, |11>} everywhere in this library.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "phasedamp/qmath.hpp"

namespace phasedamp {

/// Four-parameter family covering every pure two-qubit state up to local
/// z-rotations: local x-rotations by theta1, theta2 applied to
/// sqrt(a)|00> + exp(-i chi) sqrt(1-a)|11>.
struct PureStateParams {
    double schmidt_weight;  // a in [0, 1]
    double chi;             // relative phase, radians
    double theta1;          // x-rotation angle on qubit A, radians
    double theta2;          // x-rotation angle on qubit B, radians

    PureStateParams(double a, double chi_, double t1, double t2)
        : schmidt_weight(a), chi(reduce(chi_)), theta1(reduce(t1)), theta2(reduce(t2)) {
        if (!(a >= 0.0 && a <= 1.0))
            throw std::invalid_argument("PureStateParams: schmidt weight outside [0, 1]");
    }

private:
    static double reduce(double angle) {
        const double two_pi = 2.0 * std::numbers::pi;
        double r = std::fmod(angle, two_pi);
        if (r < 0.0) r += two_pi;
        return r;
    }
};

/// Product state |phi1> (x) |phi2> with |phi_i> = (alpha_i, beta_i).
struct SeparableParams {
    cxd alpha1, beta1;
    cxd alpha2, beta2;

    SeparableParams(cxd a1, cxd b1, cxd a2, cxd b2) : alpha1(a1), beta1(b1), alpha2(a2), beta2(b2) {
        if (std::abs(std::norm(a1) + std::norm(b1) - 1.0) > kSymTol ||
            std::abs(std::norm(a2) + std::norm(b2) - 1.0) > kSymTol)
            throw std::invalid_argument("SeparableParams: single-qubit factors not normalized");
    }
};

/// Pure two-qubit state vector, unit norm.
struct StateVector4 {
    CVec4 amp;

    double norm() const {
        double s = 0.0;
        for (const cxd& x : amp.e) s += std::norm(x);
        return std::sqrt(s);
    }
};

/// Density matrix of two qubits. validate() enforces Hermiticity and unit
/// trace to 1e-12 and positivity down to -1e-10.
struct TwoQubitState {
    CMat4 rho;

    void validate() const {
        if (!all_finite(rho)) throw std::invalid_argument("TwoQubitState: non-finite entries");
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (std::abs(rho(i, j) - std::conj(rho(j, i))) > kSymTol)
                    throw std::invalid_argument("TwoQubitState: not Hermitian");
        if (std::abs(trace(rho) - cxd(1.0, 0.0)) > kSymTol)
            throw std::invalid_argument("TwoQubitState: trace != 1");
        const Spectrum4 spec = eig4(rho);
        for (const cxd& ev : spec.values)
            if (ev.real() < -1e-10)
                throw std::invalid_argument("TwoQubitState: not positive semidefinite");
    }
};

struct ZExpectations {
    double za;   // <sigma_z^A (x) 1>
    double zb;   // <1 (x) sigma_z^B>
    double zab;  // <sigma_z^A (x) sigma_z^B>
};

struct SRInvariants {
    cxd s;  // <psi| sigma_y (x) sigma_y |psi*>
    cxd r;  // <psi| (sigma_z sigma_y) (x) (sigma_z sigma_y) |psi*>
};

namespace detail {

inline CMat2 x_rotation(double theta) {
    CMat2 u;
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    u(0, 0) = c;
    u(0, 1) = cxd(0.0, -s);
    u(1, 0) = cxd(0.0, -s);
    u(1, 1) = c;
    return u;
}

}  // namespace detail

/// Build the four-parameter pure state
/// (exp(-i theta1 sigma_x / 2) (x) exp(-i theta2 sigma_x / 2))
///   (sqrt(a)|00> + exp(-i chi) sqrt(1-a)|11>).
/// The global phase is fixed by taking sqrt(a) real and nonnegative.
inline StateVector4 make_general_pure(const PureStateParams& p) {
    CVec4 base;
    base[0] = std::sqrt(p.schmidt_weight);
    base[3] = std::exp(cxd(0.0, -p.chi)) * std::sqrt(1.0 - p.schmidt_weight);
    const CMat4 rot = tensor2(detail::x_rotation(p.theta1), detail::x_rotation(p.theta2));
    return StateVector4{rot * base};
}

/// Product state with amplitudes (a1 a2, a1 b2, b1 a2, b1 b2).
inline StateVector4 make_separable(const SeparableParams& p) {
    StateVector4 psi;
    psi.amp[0] = p.alpha1 * p.alpha2;
    psi.amp[1] = p.alpha1 * p.beta2;
    psi.amp[2] = p.beta1 * p.alpha2;
    psi.amp[3] = p.beta1 * p.beta2;
    return psi;
}

inline TwoQubitState density_matrix(const StateVector4& psi) {
    TwoQubitState s;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) s.rho(i, j) = psi.amp[i] * std::conj(psi.amp[j]);
    return s;
}

namespace detail {

inline double real_expectation(const StateVector4& psi, const CMat4& op) {
    cxd v{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) v += std::conj(psi.amp[i]) * op(i, j) * psi.amp[j];
    return v.real();
}

}  // namespace detail

/// z-expectation values of the state against the diagonal operators
/// sigma_z (x) 1, 1 (x) sigma_z, sigma_z (x) sigma_z.
inline ZExpectations z_expectations(const StateVector4& psi) {
    static const CMat4 za = tensor2(pauli_z(), identity2());
    static const CMat4 zb = tensor2(identity2(), pauli_z());
    static const CMat4 zab = tensor2(pauli_z(), pauli_z());
    return {detail::real_expectation(psi, za), detail::real_expectation(psi, zb),
            detail::real_expectation(psi, zab)};
}

/// The bilinear invariants governing pure-state concurrence evolution,
/// s = <psi| Sigma_y |psi*> and r = <psi| Sigma_z Sigma_y |psi*>, with the
/// conjugation |psi*> taken entrywise in the computational basis.
inline SRInvariants sr_invariants(const StateVector4& psi) {
    static const CMat4 sy = tensor2(pauli_y(), pauli_y());
    static const CMat4 szsy = tensor2(pauli_z(), pauli_z()) * tensor2(pauli_y(), pauli_y());
    CVec4 conj_psi;
    for (std::size_t i = 0; i < 4; ++i) conj_psi[i] = std::conj(psi.amp[i]);
    cxd s{}, r{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            s += std::conj(psi.amp[i]) * sy(i, j) * conj_psi[j];
            r += std::conj(psi.amp[i]) * szsy(i, j) * conj_psi[j];
        }
    return {s, r};
}

/// Concurrence of a pure state, |s|.
inline double pure_concurrence(const StateVector4& psi) {
    const double c = std::abs(sr_invariants(psi).s);
    return std::min(1.0, std::max(0.0, c));
}

}  // namespace phasedamp
