#pragma once

// RU phase-damping channels built from Gaussian field statistics.
//
// Phase convention: a field realization Omega multiplies the coherence
// rho_mn by exp(i c^{mn} . Omega), where c^{mn} = e_m - e_n with the basis
// labels e_1 = (0,0,0), e_2 = (0,1,1), e_3 = (1,0,1), e_4 = (1,1,0). This
// corresponds to sampled unitaries
//   U(Omega) = exp(-(i/2)(Omega_1 sz(x)1 + Omega_2 1(x)sz + Omega_3 sz(x)sz))
// and is the unique convention under which the c-vectors, the RLU noise
// probabilities, and the closed-form damping factors exp(-(s_i^2 + s_j^2))
// are mutually consistent.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "phasedamp/qmath.hpp"
#include "phasedamp/states.hpp"

namespace phasedamp {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// --- basis labels and coherence vectors ------------------------------------

/// Basis label e_m of the computational-basis state m (0-based).
inline constexpr Vec3 basis_vector(std::size_t m) {
    constexpr std::array<Vec3, 4> e{{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}};
    return e[m];
}

/// Coherence vector c^{mn} = e_m - e_n; antisymmetric, zero on the diagonal.
inline constexpr Vec3 coherence_vector(std::size_t m, std::size_t n) {
    const Vec3 em = basis_vector(m);
    const Vec3 en = basis_vector(n);
    return {em[0] - en[0], em[1] - en[1], em[2] - en[2]};
}

// Diagonal signs of sz(x)1, 1(x)sz, sz(x)sz; equal to 1 - 2 e_m componentwise.
inline constexpr std::array<std::array<double, 4>, 3> kZSigns{{
    {1.0, 1.0, -1.0, -1.0},
    {1.0, -1.0, 1.0, -1.0},
    {1.0, -1.0, -1.0, 1.0},
}};

// --- small real symmetric 3x3 eigensolver (covariance handling) ------------

namespace detail {

struct Sym3Eigen {
    Vec3 values{};
    Mat3 vectors{};  // columns are eigenvectors
};

inline Sym3Eigen jacobi_sym3(const Mat3& a_in) {
    Mat3 a = a_in;
    Mat3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    return {{a[0][0], a[1][1], a[2][2]}, v};
}

}  // namespace detail

// --- domain types -----------------------------------------------------------

/// Mean vector and covariance of the three accumulated phases
/// (Omega_1, Omega_2, Omega_3). The per-component variances satisfy
/// Sigma_kk = 2 varsigma_k^2.
struct GaussianFieldSpec {
    Vec3 mean{};
    Mat3 covariance{};

    /// Symmetry to 1e-12 and positive semidefiniteness (eigenvalues down to
    /// -1e-12 are tolerated and treated as zero).
    void validate() const {
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (std::abs(covariance[i][j] - covariance[j][i]) > kSymTol)
                    throw std::invalid_argument("GaussianFieldSpec: covariance not symmetric");
        const auto eig = detail::jacobi_sym3(covariance);
        for (double ev : eig.values)
            if (ev < -1e-12)
                throw std::invalid_argument(
                    "GaussianFieldSpec: covariance not positive semidefinite");
    }

    /// varsigma_k^2 = Sigma_kk / 2.
    Vec3 variances() const {
        return {covariance[0][0] / 2.0, covariance[1][1] / 2.0, covariance[2][2] / 2.0};
    }

    bool is_diagonal(double tol = kSymTol) const {
        return std::abs(covariance[0][1]) <= tol && std::abs(covariance[0][2]) <= tol &&
               std::abs(covariance[1][2]) <= tol && std::abs(covariance[1][0]) <= tol &&
               std::abs(covariance[2][0]) <= tol && std::abs(covariance[2][1]) <= tol;
    }

    /// A factor L with L L^T = Sigma (rank-deficient covariances allowed).
    Mat3 covariance_factor() const {
        const auto eig = detail::jacobi_sym3(covariance);
        Mat3 l{};
        for (int j = 0; j < 3; ++j) {
            if (eig.values[j] < -1e-12)
                throw std::invalid_argument("GaussianFieldSpec: covariance not factorizable");
            const double s = std::sqrt(std::max(eig.values[j], 0.0));
            for (int i = 0; i < 3; ++i) l[i][j] = eig.vectors[i][j] * s;
        }
        return l;
    }
};

/// Uncorrelated spec with varsigma_k^2 as given (Sigma = diag(2 varsigma^2)).
inline GaussianFieldSpec make_uncorrelated_spec(const Vec3& varsigma_sq, const Vec3& mean = {}) {
    GaussianFieldSpec spec;
    spec.mean = mean;
    for (int k = 0; k < 3; ++k) {
        if (varsigma_sq[k] < 0.0)
            throw std::invalid_argument("make_uncorrelated_spec: negative variance");
        spec.covariance[k][k] = 2.0 * varsigma_sq[k];
    }
    return spec;
}

/// The damping matrix D of a phase-damping channel together with its
/// decomposition D = Dmu * Dtilde into the unimodular phase part and the
/// real noise part (entrywise product).
struct PhaseDampingChannel {
    CMat4 damping;     // D
    CMat4 phase_part;  // Dmu, |entries| = 1
    CMat4 noise_part;  // Dtilde, real

    /// Structural invariants: unit diagonal, Hermitian, D = Dmu * Dtilde,
    /// unimodular phase part, real noise part with |entries| <= 1, and D
    /// positive semidefinite (Gramian of unit vectors).
    void validate() const {
        for (std::size_t m = 0; m < 4; ++m)
            if (std::abs(damping(m, m) - cxd(1.0, 0.0)) > kSymTol)
                throw std::invalid_argument("PhaseDampingChannel: diagonal != 1");
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t n = 0; n < 4; ++n) {
                if (std::abs(damping(m, n) - std::conj(damping(n, m))) > kSymTol)
                    throw std::invalid_argument("PhaseDampingChannel: D not Hermitian");
                if (std::abs(std::abs(phase_part(m, n)) - 1.0) > kSymTol)
                    throw std::invalid_argument("PhaseDampingChannel: phase part not unimodular");
                const cxd nt = noise_part(m, n);
                if (std::abs(nt.imag()) > kSymTol || std::abs(nt.real()) > 1.0 + kSymTol)
                    throw std::invalid_argument("PhaseDampingChannel: bad noise part");
                if (std::abs(damping(m, n) - phase_part(m, n) * nt) > kSymTol)
                    throw std::invalid_argument("PhaseDampingChannel: D != Dmu * Dtilde");
            }
        const Spectrum4 spec = eig4(damping);
        for (const cxd& ev : spec.values)
            if (ev.real() < -1e-10)
                throw std::invalid_argument("PhaseDampingChannel: D not positive semidefinite");
    }
};

/// RLU mixing weights of the noise channel,
/// Dtilde * rho = p1 rho + p2 ZZ rho ZZ + p3 Z1 rho Z1 + p4 1Z rho 1Z.
struct NoiseProbs {
    double p1, p2, p3, p4;

    void validate() const {
        for (double p : {p1, p2, p3, p4})
            if (!(p >= -kSymTol && p <= 1.0 + kSymTol))
                throw std::invalid_argument("NoiseProbs: weight outside [0, 1]");
        if (std::abs(p1 + p2 + p3 + p4 - 1.0) > kSymTol)
            throw std::invalid_argument("NoiseProbs: weights do not sum to 1");
    }
};

// --- channel construction ---------------------------------------------------

/// Build the full damping matrix from the Gaussian characteristic function:
/// Dmu_mn = exp(i c^{mn} . mu),  Dtilde_mn = exp(-1/2 c^{mn}^T Sigma c^{mn}).
inline PhaseDampingChannel damping_matrix(const GaussianFieldSpec& spec) {
    spec.validate();
    PhaseDampingChannel ch;
    for (std::size_t m = 0; m < 4; ++m) {
        ch.damping(m, m) = 1.0;
        ch.phase_part(m, m) = 1.0;
        ch.noise_part(m, m) = 1.0;
        for (std::size_t n = m + 1; n < 4; ++n) {
            const Vec3 c = coherence_vector(m, n);
            double quad = 0.0;
            double phase = 0.0;
            for (int k = 0; k < 3; ++k) {
                phase += c[k] * spec.mean[k];
                for (int l = 0; l < 3; ++l) quad += c[k] * spec.covariance[k][l] * c[l];
            }
            const double damp = std::exp(-0.5 * quad);
            const cxd mu_phase = std::exp(cxd(0.0, phase));
            ch.phase_part(m, n) = mu_phase;
            ch.phase_part(n, m) = std::conj(mu_phase);
            ch.noise_part(m, n) = damp;
            ch.noise_part(n, m) = damp;
            ch.damping(m, n) = mu_phase * damp;
            ch.damping(n, m) = std::conj(mu_phase * damp);
        }
    }
    return ch;
}

/// RLU probabilities of the noise channel in closed form, with
/// varsigma_k^2 = Sigma_kk / 2. Only defined for uncorrelated fields; a
/// correlated covariance has no RLU probability form and is rejected.
inline NoiseProbs noise_probabilities(const GaussianFieldSpec& spec) {
    spec.validate();
    if (!spec.is_diagonal())
        throw std::invalid_argument(
            "noise_probabilities: correlated noise has no RLU probability form");
    const Vec3 vs = spec.variances();
    const double e1 = std::exp(-vs[0]);
    const double e2 = std::exp(-vs[1]);
    const double e3 = std::exp(-vs[2]);
    NoiseProbs p{
        ((1 + e1) * (1 + e2) * (1 + e3) + (1 - e1) * (1 - e2) * (1 - e3)) / 8.0,
        ((1 + e1) * (1 + e2) * (1 - e3) + (1 - e1) * (1 - e2) * (1 + e3)) / 8.0,
        ((1 + e1) * (1 - e2) * (1 - e3) + (1 - e1) * (1 + e2) * (1 + e3)) / 8.0,
        ((1 + e1) * (1 - e2) * (1 + e3) + (1 - e1) * (1 + e2) * (1 - e3)) / 8.0,
    };
    p.validate();
    return p;
}

// --- channel application ----------------------------------------------------

/// rho' = D * rho (Hadamard product). Diagonal entries are copied, so the
/// populations are preserved bit-exactly.
inline TwoQubitState apply_channel(const PhaseDampingChannel& ch, const TwoQubitState& state) {
    TwoQubitState out;
    for (std::size_t m = 0; m < 4; ++m) {
        out.rho(m, m) = state.rho(m, m);
        for (std::size_t n = 0; n < 4; ++n)
            if (n != m) out.rho(m, n) = ch.damping(m, n) * state.rho(m, n);
    }
    return out;
}

/// The four-term RLU mixture
/// p1 rho + p2 ZZ rho ZZ + p3 Z1 rho Z1 + p4 1Z rho 1Z, evaluated through
/// the sign structure of the diagonal unitaries (diagonal preserved exactly).
inline TwoQubitState apply_noise_rlu(const NoiseProbs& p, const TwoQubitState& state) {
    p.validate();
    TwoQubitState out;
    for (std::size_t m = 0; m < 4; ++m) {
        out.rho(m, m) = state.rho(m, m);
        for (std::size_t n = 0; n < 4; ++n) {
            if (n == m) continue;
            const double w = p.p1 + p.p2 * kZSigns[2][m] * kZSigns[2][n] +
                             p.p3 * kZSigns[0][m] * kZSigns[0][n] +
                             p.p4 * kZSigns[1][m] * kZSigns[1][n];
            out.rho(m, n) = w * state.rho(m, n);
        }
    }
    return out;
}

/// Diagonal mean-Hamiltonian unitary with phases exp(-(i/2)(+-mu1 +-mu2 +-mu3))
/// arranged so that (U)_mm (U)*_nn = exp(i c^{mn} . mu).
inline CMat4 mean_unitary(const GaussianFieldSpec& spec) {
    CMat4 u;
    for (std::size_t m = 0; m < 4; ++m) {
        const double phase = -0.5 * (spec.mean[0] * kZSigns[0][m] + spec.mean[1] * kZSigns[1][m] +
                                     spec.mean[2] * kZSigns[2][m]);
        u(m, m) = std::exp(cxd(0.0, phase));
    }
    return u;
}

namespace detail {

// Dtilde entries reconstructed from RLU weights; equals the sign-weighted sum
// used by apply_noise_rlu.
inline CMat4 noise_matrix(const NoiseProbs& p) {
    CMat4 d;
    for (std::size_t m = 0; m < 4; ++m) {
        d(m, m) = 1.0;
        for (std::size_t n = 0; n < 4; ++n) {
            if (n == m) continue;
            d(m, n) = p.p1 + p.p2 * kZSigns[2][m] * kZSigns[2][n] +
                      p.p3 * kZSigns[0][m] * kZSigns[0][n] +
                      p.p4 * kZSigns[1][m] * kZSigns[1][n];
        }
    }
    return d;
}

inline PhaseDampingChannel channel_from_probs(const NoiseProbs& p) {
    PhaseDampingChannel ch;
    ch.noise_part = noise_matrix(p);
    ch.damping = ch.noise_part;
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t n = 0; n < 4; ++n) ch.phase_part(m, n) = 1.0;
    return ch;
}

}  // namespace detail

struct RluChannel {
    PhaseDampingChannel channel;
    NoiseProbs probs;
};

/// Single-sided phase damping on qubit A,
/// rho' = (1-q) rho + q (sz(x)1) rho (sz(x)1).
inline RluChannel single_sided_channel(double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("single_sided_channel: q outside [0, 1]");
    const NoiseProbs p{1.0 - q, 0.0, q, 0.0};
    return {detail::channel_from_probs(p), p};
}

/// Pure two-qubit dephasing,
/// rho' = (1-q) rho + q (sz(x)sz) rho (sz(x)sz).
inline RluChannel two_qubit_dephasing_channel(double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("two_qubit_dephasing_channel: q outside [0, 1]");
    const NoiseProbs p{1.0 - q, q, 0.0, 0.0};
    return {detail::channel_from_probs(p), p};
}

// --- Kraus representation -----------------------------------------------------

struct KrausTerm {
    double weight;  // sqrt(p_i)
    CMat4 unitary;  // U_mu V_i, diagonal
};

/// Kraus operators K_i = sqrt(p_i) U_mu V_i with
/// V_i in {1, sz(x)sz, sz(x)1, 1(x)sz}; zero-weight terms are dropped.
inline std::vector<KrausTerm> kraus_form(const NoiseProbs& p, const Vec3& mu) {
    p.validate();
    GaussianFieldSpec mean_only;
    mean_only.mean = mu;
    const CMat4 umu = mean_unitary(mean_only);

    std::array<CMat4, 4> flips{identity4(), tensor2(pauli_z(), pauli_z()),
                               tensor2(pauli_z(), identity2()), tensor2(identity2(), pauli_z())};
    const std::array<double, 4> weights{p.p1, p.p2, p.p3, p.p4};

    std::vector<KrausTerm> terms;
    for (std::size_t i = 0; i < 4; ++i) {
        if (weights[i] <= 0.0) continue;
        terms.push_back({std::sqrt(weights[i]), umu * flips[i]});
    }
    return terms;
}

/// Apply a Kraus list: rho' = sum_i K_i rho K_i^dagger.
inline TwoQubitState apply_kraus(const std::vector<KrausTerm>& terms, const TwoQubitState& state) {
    TwoQubitState out;
    for (const KrausTerm& t : terms) {
        const CMat4 k = t.weight * t.unitary;
        out.rho = out.rho + k * state.rho * adjoint(k);
    }
    return out;
}

}  // namespace phasedamp
