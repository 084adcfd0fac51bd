#pragma once

// Boundary curves and thresholds of the concurrence-purity diagram:
// the Bell-rank family C_m(P), the Werner/dephasing curves, the separable
// pure-two-qubit bound surface, the uncorrelated-damping region inequality,
// and the robustness thresholds.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "phasedamp/states.hpp"

namespace phasedamp {

/// Bell-rank bound C_m(P) = (2(m-1) sqrt((mP-1)/(m-1)) - (m-2)) / m for
/// m in {2, 3, 4}, defined for P >= 1/m, clamped to [0, 1].
inline double cm_bound(int m, double p) {
    if (m < 2 || m > 4) throw std::invalid_argument("cm_bound: Bell rank must be 2, 3 or 4");
    const double p_min = 1.0 / m;
    if (p < p_min - kSymTol) throw std::domain_error("cm_bound: purity below 1/m");
    const double arg = std::max((m * p - 1.0) / (m - 1.0), 0.0);
    const double c = (2.0 * (m - 1) * std::sqrt(arg) - (m - 2)) / m;
    return std::clamp(c, 0.0, 1.0);
}

/// Werner-state curve C(P) = (sqrt(12P - 3) - 1) / 2 for P >= 1/3;
/// identical to cm_bound(4, P).
inline double werner_curve(double p) {
    if (p < 1.0 / 3.0 - kSymTol) throw std::domain_error("werner_curve: purity below 1/3");
    const double c = 0.5 * (std::sqrt(std::max(12.0 * p - 3.0, 0.0)) - 1.0);
    return std::clamp(c, 0.0, 1.0);
}

/// Maximal concurrence of a separable state under pure two-qubit damping at
/// fixed purity and local polarizations za, zb:
///   C(P) = sqrt((1-za^2)(1-zb^2) / (1 - za^2 zb^2))
///          * sqrt(2P - 1 - za^2 zb^2),   P >= (1 + za^2 zb^2) / 2.
inline double pure2q_separable_bound(double p, double za, double zb) {
    if (!(za >= -1.0 && za <= 1.0 && zb >= -1.0 && zb <= 1.0))
        throw std::invalid_argument("pure2q_separable_bound: polarization outside [-1, 1]");
    const double zz = za * za * zb * zb;
    if (p < 0.5 * (1.0 + zz) - kSymTol)
        throw std::domain_error("pure2q_separable_bound: purity below (1 + za^2 zb^2)/2");
    const double denom = 1.0 - zz;
    if (denom <= 0.0) return 0.0;  // fully polarized: variance factors vanish
    const double pref = (1.0 - za * za) * (1.0 - zb * zb) / denom;
    const double c = std::sqrt(pref) * std::sqrt(std::max(2.0 * p - 1.0 - zz, 0.0));
    return std::clamp(c, 0.0, 1.0);
}

/// The bound surface at equal polarizations z (the maximizing slice):
/// C(P, z) = sqrt((1-z^2)/(1+z^2) (2P - 1 - z^4)), equals
/// pure2q_separable_bound(P, z, z).
inline double cmax_surface(double p, double z) {
    if (!(z >= -1.0 && z <= 1.0)) throw std::invalid_argument("cmax_surface: z outside [-1, 1]");
    const double z2 = z * z;
    if (2.0 * p - 1.0 - z2 * z2 < -kSymTol)
        throw std::domain_error("cmax_surface: purity below (1 + z^4)/2");
    const double c =
        std::sqrt((1.0 - z2) / (1.0 + z2) * std::max(2.0 * p - 1.0 - z2 * z2, 0.0));
    return std::clamp(c, 0.0, 1.0);
}

/// Region inequality for uncorrelated phase damping of separable states:
/// true iff C^2 + C + 1 <= 3P (with +1e-10 slack).
inline bool uncorrelated_region_check(double c, double p) {
    return c * c + c + 1.0 <= 3.0 * p + 1e-10;
}

/// Largest initial concurrence C0 such that the chi = 0 state with x-rotation
/// angles theta1, theta2 keeps its concurrence under pure two-qubit dephasing
/// (the robust-entanglement condition s^2 <= r^2). Computed by bisection on
/// the Schmidt weight a in [0, 1/2] over the sign of r^2 - s^2.
///
/// The angles are those of the rotations exp(-i theta sigma_x); relative to
/// PureStateParams (half-angle convention) they enter doubled. Returns 1 when
/// every C0 is robust, e.g. for cos(theta1) cos(theta2) = +-1.
inline double robust_threshold(double theta1, double theta2) {
    auto robust_margin = [&](double a) {
        const StateVector4 psi =
            make_general_pure(PureStateParams(a, 0.0, 2.0 * theta1, 2.0 * theta2));
        const SRInvariants sr = sr_invariants(psi);
        return (sr.r * sr.r - sr.s * sr.s).real();
    };
    if (robust_margin(0.5) >= 0.0) return 1.0;  // robust up to the Bell state
    double lo = 0.0;  // robust side (margin >= 0 at C0 = 0)
    double hi = 0.5;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (robust_margin(mid) >= 0.0 ? lo : hi) = mid;
    }
    const double a = 0.5 * (lo + hi);
    return 2.0 * std::sqrt(a * (1.0 - a));
}

/// Purity floor for single-sided phase damping: every state with initial
/// concurrence C0 is still entangled while P > 1 - C0^2 / 2.
inline double purity_floor_single_sided(double c0) {
    if (!(c0 >= 0.0 && c0 <= 1.0))
        throw std::invalid_argument("purity_floor_single_sided: C0 outside [0, 1]");
    return 1.0 - 0.5 * c0 * c0;
}

/// A named boundary curve of the CP diagram with its purity domain.
struct BoundCurve {
    enum class Kind { BellRank2, BellRank3, BellRank4, Werner, Pure2QSeparable, Surface };

    Kind kind;
    double za = 0.0;  // Pure2QSeparable
    double zb = 0.0;  // Pure2QSeparable
    double z = 0.0;   // Surface

    double p_min() const {
        switch (kind) {
            case Kind::BellRank2: return 0.5;
            case Kind::BellRank3: return 3.0 / 8.0;
            case Kind::BellRank4: return 1.0 / 3.0;
            case Kind::Werner: return 1.0 / 3.0;
            case Kind::Pure2QSeparable: return 0.5 * (1.0 + za * za * zb * zb);
            case Kind::Surface: return 0.5 * (1.0 + z * z * z * z);
        }
        throw std::logic_error("BoundCurve: unknown kind");
    }

    double value(double p) const {
        switch (kind) {
            case Kind::BellRank2: return cm_bound(2, p);
            case Kind::BellRank3: return cm_bound(3, p);
            case Kind::BellRank4: return cm_bound(4, p);
            case Kind::Werner: return werner_curve(p);
            case Kind::Pure2QSeparable: return pure2q_separable_bound(p, za, zb);
            case Kind::Surface: return cmax_surface(p, z);
        }
        throw std::logic_error("BoundCurve: unknown kind");
    }

    std::string label() const {
        switch (kind) {
            case Kind::BellRank2: return "C2";
            case Kind::BellRank3: return "C3";
            case Kind::BellRank4: return "C4";
            case Kind::Werner: return "Werner";
            case Kind::Pure2QSeparable:
                return "Pure2QSep:" + std::to_string(za) + ":" + std::to_string(zb);
            case Kind::Surface: return "Surface:" + std::to_string(z);
        }
        throw std::logic_error("BoundCurve: unknown kind");
    }
};

}  // namespace phasedamp
