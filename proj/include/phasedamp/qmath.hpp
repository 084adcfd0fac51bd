#pragma once

// Dense complex linear algebra for the 2x2 and 4x4 matrices this library
// lives on: products, adjoints, tensor and Hadamard products, traces, and
// eigenvalues of general complex 4x4 matrices via shifted QR iteration.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace phasedamp {

using cxd = std::complex<double>;

// Central tolerances. Algebraic identities are expected to hold to
// kAlgebraTol, eigenpairs to kEigenTol; kSymTol guards symmetry/PSD checks.
inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kEigenTol = 1e-8;
inline constexpr double kSymTol = 1e-12;

struct CMat2 {
    std::array<cxd, 4> e{};

    cxd& operator()(std::size_t i, std::size_t j) { return e[2 * i + j]; }
    const cxd& operator()(std::size_t i, std::size_t j) const { return e[2 * i + j]; }
};

struct CMat4 {
    std::array<cxd, 16> e{};

    cxd& operator()(std::size_t i, std::size_t j) { return e[4 * i + j]; }
    const cxd& operator()(std::size_t i, std::size_t j) const { return e[4 * i + j]; }
};

struct CVec4 {
    std::array<cxd, 4> e{};

    cxd& operator[](std::size_t i) { return e[i]; }
    const cxd& operator[](std::size_t i) const { return e[i]; }
};

// --- constants ------------------------------------------------------------

inline CMat2 identity2() {
    CMat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    return m;
}

inline CMat4 identity4() {
    CMat4 m;
    for (std::size_t i = 0; i < 4; ++i) m(i, i) = 1.0;
    return m;
}

inline CMat2 pauli_x() {
    CMat2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

inline CMat2 pauli_y() {
    CMat2 m;
    m(0, 1) = cxd(0.0, -1.0);
    m(1, 0) = cxd(0.0, 1.0);
    return m;
}

inline CMat2 pauli_z() {
    CMat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

// --- elementwise / algebraic operations -----------------------------------

inline CMat4 operator+(const CMat4& a, const CMat4& b) {
    CMat4 c;
    for (std::size_t i = 0; i < 16; ++i) c.e[i] = a.e[i] + b.e[i];
    return c;
}

inline CMat4 operator-(const CMat4& a, const CMat4& b) {
    CMat4 c;
    for (std::size_t i = 0; i < 16; ++i) c.e[i] = a.e[i] - b.e[i];
    return c;
}

inline CMat4 operator*(const cxd& s, const CMat4& a) {
    CMat4 c;
    for (std::size_t i = 0; i < 16; ++i) c.e[i] = s * a.e[i];
    return c;
}

inline CMat4 operator*(double s, const CMat4& a) { return cxd(s, 0.0) * a; }

inline CMat4 operator*(const CMat4& a, const CMat4& b) {
    CMat4 c;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k) {
            const cxd aik = a(i, k);
            if (aik == cxd{}) continue;
            for (std::size_t j = 0; j < 4; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline CVec4 operator*(const CMat4& a, const CVec4& v) {
    CVec4 w;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) w[i] += a(i, j) * v[j];
    return w;
}

inline CMat4 adjoint(const CMat4& a) {
    CMat4 c;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) c(i, j) = std::conj(a(j, i));
    return c;
}

inline CMat4 conj_entries(const CMat4& a) {
    CMat4 c;
    for (std::size_t i = 0; i < 16; ++i) c.e[i] = std::conj(a.e[i]);
    return c;
}

inline cxd trace(const CMat4& a) { return a(0, 0) + a(1, 1) + a(2, 2) + a(3, 3); }

inline double frobenius_norm(const CMat4& a) {
    double s = 0.0;
    for (const cxd& x : a.e) s += std::norm(x);
    return std::sqrt(s);
}

inline bool all_finite(const CMat4& a) {
    for (const cxd& x : a.e)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

inline double max_abs_diff(const CMat4& a, const CMat4& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < 16; ++i) m = std::max(m, std::abs(a.e[i] - b.e[i]));
    return m;
}

// Determinant by cofactor expansion along the first row.
inline cxd det(const CMat4& a) {
    auto det3 = [&](std::size_t r0, std::size_t r1, std::size_t r2, std::size_t c0,
                    std::size_t c1, std::size_t c2) {
        return a(r0, c0) * (a(r1, c1) * a(r2, c2) - a(r1, c2) * a(r2, c1)) -
               a(r0, c1) * (a(r1, c0) * a(r2, c2) - a(r1, c2) * a(r2, c0)) +
               a(r0, c2) * (a(r1, c0) * a(r2, c1) - a(r1, c1) * a(r2, c0));
    };
    return a(0, 0) * det3(1, 2, 3, 1, 2, 3) - a(0, 1) * det3(1, 2, 3, 0, 2, 3) +
           a(0, 2) * det3(1, 2, 3, 0, 1, 3) - a(0, 3) * det3(1, 2, 3, 0, 1, 2);
}

/// Tensor (Kronecker) product of two qubit operators,
/// (A (x) B)[2i+k][2j+l] = A[i][j] B[k][l].
inline CMat4 tensor2(const CMat2& a, const CMat2& b) {
    CMat4 c;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l)
                    c(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return c;
}

/// Hadamard (entrywise) product.
inline CMat4 hadamard(const CMat4& a, const CMat4& b) {
    CMat4 c;
    for (std::size_t i = 0; i < 16; ++i) c.e[i] = a.e[i] * b.e[i];
    return c;
}

// --- eigenvalues of a general complex 4x4 matrix ---------------------------

struct Spectrum4 {
    std::array<cxd, 4> values{};  // unordered
};

namespace detail {

// Complex Givens rotation acting on rows (i, i+1): chosen so that the
// (i+1, col) entry becomes zero. c is real, s complex.
struct Givens {
    double c = 1.0;
    cxd s{};
};

inline Givens make_givens(const cxd& a, const cxd& b) {
    Givens g;
    const double aa = std::abs(a);
    const double bb = std::abs(b);
    if (bb == 0.0) {
        g.c = 1.0;
        g.s = 0.0;
        return g;
    }
    if (aa == 0.0) {
        g.c = 0.0;
        g.s = 1.0;
        return g;
    }
    const double r = std::hypot(aa, bb);
    g.c = aa / r;
    g.s = (a / aa) * std::conj(b) / r;
    return g;
}

// Left-multiply rows i, i+1 of H by [[c, s], [-conj(s), c]].
inline void apply_left(CMat4& h, std::size_t i, const Givens& g) {
    for (std::size_t j = 0; j < 4; ++j) {
        const cxd x = h(i, j);
        const cxd y = h(i + 1, j);
        h(i, j) = g.c * x + g.s * y;
        h(i + 1, j) = -std::conj(g.s) * x + g.c * y;
    }
}

// Right-multiply columns i, i+1 of H by the adjoint rotation.
inline void apply_right(CMat4& h, std::size_t i, const Givens& g) {
    for (std::size_t j = 0; j < 4; ++j) {
        const cxd x = h(j, i);
        const cxd y = h(j, i + 1);
        h(j, i) = g.c * x + std::conj(g.s) * y;
        h(j, i + 1) = -g.s * x + g.c * y;
    }
}

// Householder similarity reduction to upper Hessenberg form.
inline void hessenberg(CMat4& h) {
    for (std::size_t k = 0; k + 2 < 4; ++k) {
        std::array<cxd, 4> v{};
        double norm = 0.0;
        for (std::size_t i = k + 1; i < 4; ++i) norm += std::norm(h(i, k));
        norm = std::sqrt(norm);
        if (norm <= 1e-300) continue;
        const cxd x0 = h(k + 1, k);
        const cxd phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cxd(1.0, 0.0);
        const cxd alpha = -phase * norm;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < 4; ++i) {
            v[i] = h(i, k);
            if (i == k + 1) v[i] -= alpha;
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 <= 1e-300) continue;
        // H <- P H P with P = I - 2 v v^dag / (v^dag v)
        for (std::size_t j = 0; j < 4; ++j) {
            cxd dot{};
            for (std::size_t i = k + 1; i < 4; ++i) dot += std::conj(v[i]) * h(i, j);
            dot *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < 4; ++i) h(i, j) -= v[i] * dot;
        }
        for (std::size_t i = 0; i < 4; ++i) {
            cxd dot{};
            for (std::size_t j = k + 1; j < 4; ++j) dot += h(i, j) * v[j];
            dot *= 2.0 / vnorm2;
            for (std::size_t j = k + 1; j < 4; ++j) h(i, j) -= dot * std::conj(v[j]);
        }
    }
}

// Eigenvalues of the 2x2 block [[a, b], [c, d]].
inline std::pair<cxd, cxd> eig2(const cxd& a, const cxd& b, const cxd& c, const cxd& d) {
    const cxd m = 0.5 * (a + d);
    const cxd disc = std::sqrt(m * m - (a * d - b * c));
    return {m + disc, m - disc};
}

}  // namespace detail

/// Eigenvalues of a general complex 4x4 matrix. Unshifted-then-shifted QR
/// iteration on the Hessenberg form; deflation tolerance 1e-12, iteration
/// cap 500. Throws std::runtime_error on non-convergence.
inline Spectrum4 eig4(const CMat4& m) {
    if (!all_finite(m)) throw std::invalid_argument("eig4: non-finite input");

    CMat4 h = m;
    detail::hessenberg(h);
    h(2, 0) = h(3, 0) = h(3, 1) = 0.0;

    Spectrum4 out;
    std::size_t found = 0;
    const double fro = std::max(frobenius_norm(h), 1e-300);
    constexpr double kDeflate = 1e-12;

    std::size_t hi = 3;
    int iter = 0;
    int iter_block = 0;
    while (true) {
        // Deflate any negligible subdiagonal entries from the bottom up.
        while (hi > 0) {
            double s = std::abs(h(hi - 1, hi - 1)) + std::abs(h(hi, hi));
            if (s == 0.0) s = fro;
            if (std::abs(h(hi, hi - 1)) <= kDeflate * s) {
                h(hi, hi - 1) = 0.0;
                out.values[found++] = h(hi, hi);
                --hi;
                iter_block = 0;
            } else {
                break;
            }
        }
        if (hi == 0) {
            out.values[found++] = h(0, 0);
            break;
        }

        // Find the start of the active (unreduced) block ending at hi.
        std::size_t lo = hi;
        while (lo > 0) {
            double s = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (s == 0.0) s = fro;
            if (std::abs(h(lo, lo - 1)) <= kDeflate * s) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }

        if (hi - lo == 1) {
            // Closed-form 2x2 block.
            auto [l1, l2] = detail::eig2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
            out.values[found++] = l1;
            out.values[found++] = l2;
            if (lo == 0) break;
            hi = lo - 1;
            iter_block = 0;
            continue;
        }

        if (++iter > 500) throw std::runtime_error("eig4: QR iteration did not converge");
        ++iter_block;

        // Unshifted sweeps first, then Wilkinson shifts; an occasional
        // magnitude-based shift breaks symmetry-induced stalls.
        cxd shift{};
        if (iter_block > 3) {
            auto [l1, l2] = detail::eig2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            shift = (std::abs(l1 - h(hi, hi)) < std::abs(l2 - h(hi, hi))) ? l1 : l2;
            if (iter_block % 12 == 0) shift += cxd(std::abs(h(hi, hi - 1)), 0.0);
        }

        for (std::size_t i = 0; i < 4; ++i) h(i, i) -= shift;
        std::array<detail::Givens, 3> rots;
        for (std::size_t i = lo; i < hi; ++i) {
            rots[i] = detail::make_givens(h(i, i), h(i + 1, i));
            detail::apply_left(h, i, rots[i]);
            h(i + 1, i) = 0.0;
        }
        for (std::size_t i = lo; i < hi; ++i) detail::apply_right(h, i, rots[i]);
        for (std::size_t i = 0; i < 4; ++i) h(i, i) += shift;
    }

    if (found != 4) throw std::runtime_error("eig4: internal deflation error");
    return out;
}

}  // namespace phasedamp
