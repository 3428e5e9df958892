#pragma once

// The equation's right-hand side in Fourier variables, the resonance phase of
// a cubic interaction, the resonant/nonresonant split of the Raman term, and
// interaction-region classification.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <utility>

#include "t3nls/rational.hpp"
#include "t3nls/spectral.hpp"

namespace t3nls {

// Oscillation frequency of the nonresonant interaction (k1,k2,k3) -> k1+k2+k3.
// For alpha1 != 0 this is 3 a1 (k1+k2)(k2+k3)(k3+k1 + 2a2/(3a1)); for alpha1 = 0
// it degenerates to 2 a2 (k1+k2)(k2+k3).
inline double phase_phi(const EquationParams& p, long k1, long k2, long k3) {
    const double s12 = static_cast<double>(k1 + k2);
    const double s23 = static_cast<double>(k2 + k3);
    if (p.alpha1 == 0.0) return 2.0 * p.alpha2 * s12 * s23;
    return 3.0 * p.alpha1 * s12 * s23 * (static_cast<double>(k3 + k1) + 2.0 * p.alpha2 / (3.0 * p.alpha1));
}

// Telescoped form: symbol(k) - symbol(k1) + symbol(-k2) - symbol(k3) with
// symbol(k) = a1 k^3 + a2 k^2 and k = k1+k2+k3. Equal to phase_phi in exact
// arithmetic; kept as the cross-check route.
inline double phase_phi_expanded(const EquationParams& p, long k1, long k2, long k3) {
    auto symbol = [&](double k) { return p.alpha1 * k * k * k + p.alpha2 * k * k; };
    const double k = static_cast<double>(k1 + k2 + k3);
    return symbol(k) - symbol(static_cast<double>(k1)) + symbol(static_cast<double>(-k2)) -
           symbol(static_cast<double>(k3));
}

inline Rational phase_phi_factored_rational(const Rational& a1, const Rational& a2,
                                            long k1, long k2, long k3) {
    if (a1.is_zero()) throw invalid_parameters("phase_phi_factored_rational: alpha1 = 0");
    Rational s12(k1 + k2), s23(k2 + k3);
    Rational shift = Rational(k3 + k1) + (Rational(2) * a2) / (Rational(3) * a1);
    return Rational(3) * a1 * s12 * s23 * shift;
}

inline Rational phase_phi_expanded_rational(const Rational& a1, const Rational& a2,
                                            long k1, long k2, long k3) {
    auto symbol = [&](long k) {
        return a1 * Rational(k * k * k) + a2 * Rational(k * k);
    };
    const long k = k1 + k2 + k3;
    return symbol(k) - symbol(k1) + symbol(-k2) - symbol(k3);
}

// ---------------------------------------------------------------------------
// Interaction regions. D(k) excludes resonant triples, where the phase
// vanishes identically. Within D, D1 collects comparable-frequency triples
// and D2 its complement; D2_j marks a single dominant frequency. The primed
// decomposition serves the alpha1 = 0 analysis.

enum class RegionTag { Resonant, D1, D2Plain, D2_1, D2_2, D2_3, D1Prime, D2Prime };

enum class RegionVariant { Cubic, Schrodinger };

namespace detail {

inline bool in_d1(long k1, long k2, long k3) {
    const long a1 = std::labs(k1), a2 = std::labs(k2), a3 = std::labs(k3);
    return a2 <= 4 * a1 && a1 <= 4 * a2 && a2 <= 4 * a3 && a3 <= 4 * a2;
}

// 1, 2 or 3 when |k_j| > 4 max of the others (at most one j qualifies), else 0.
inline int d2_dominant_slot(long k1, long k2, long k3) {
    const long a1 = std::labs(k1), a2 = std::labs(k2), a3 = std::labs(k3);
    if (a1 > 4 * std::max(a2, a3)) return 1;
    if (a2 > 4 * std::max(a1, a3)) return 2;
    if (a3 > 4 * std::max(a1, a2)) return 3;
    return 0;
}

} // namespace detail

inline RegionTag classify(long k1, long k2, long k3, RegionVariant variant = RegionVariant::Cubic) {
    if ((k1 + k2) * (k2 + k3) == 0) return RegionTag::Resonant;
    if (variant == RegionVariant::Schrodinger) {
        const long a1 = std::labs(k1), a2 = std::labs(k2), a3 = std::labs(k3);
        return (a2 <= 4 * a1 || a2 <= 4 * a3) ? RegionTag::D1Prime : RegionTag::D2Prime;
    }
    if (detail::in_d1(k1, k2, k3)) return RegionTag::D1;
    switch (detail::d2_dominant_slot(k1, k2, k3)) {
        case 1: return RegionTag::D2_1;
        case 2: return RegionTag::D2_2;
        case 3: return RegionTag::D2_3;
        default: return RegionTag::D2Plain;
    }
}

// ---------------------------------------------------------------------------
// Right-hand side of the coefficient ODE system
//   duhat/dt (k) = -i(a1 k^3 + a2 k^2) uhat(k)
//     + sum_{k1+k2+k3=k} [i g1 + i g2 k + G (k1+k2)]/(2pi) uhat(k1) conj(uhat(-k2)) uhat(k3),
// with the nonlinearity evaluated alias-free on the fast path.

inline SpectralState rhs_nonlinear(const SpectralState& u, const EquationParams& p) {
    FactoredWeight kerr{cplx(0.0, p.gamma1 / two_pi), 0, 0};
    FactoredWeight steepen{cplx(0.0, p.gamma2 / two_pi), 1, 0};
    FactoredWeight raman{cplx(p.Gamma / two_pi, 0.0), 0, 1};
    SpectralState out = cubic_product(u, u, u, kerr);
    out = out + cubic_product(u, u, u, steepen);
    out = out + cubic_product(u, u, u, raman);
    return out;
}

inline SpectralState rhs_full(const SpectralState& u, const EquationParams& p) {
    SpectralState out = rhs_nonlinear(u, p);
    for (int k = -u.trunc; k <= u.trunc; ++k) {
        double kk = static_cast<double>(k);
        out.at(k) += cplx(0.0, -(p.alpha1 * kk * kk * kk + p.alpha2 * kk * kk)) * u.at(k);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Raman-term split. The transform of i u (|u|^2)_x is
//   -(1/2pi) sum_{k1+k2 != 0} (k1+k2) uhat(k1) conj(uhat(-k2)) uhat(k3);
// I1 keeps the nonresonant triples ((k1+k2)(k2+k3) != 0) and I2 the resonant
// remainder (k2+k3 = 0, k1+k2 != 0). Both are literal masked sums here.

inline std::pair<SpectralState, SpectralState> raman_resonant_split(const SpectralState& u) {
    const int n = u.trunc;
    SpectralState i1(n, u.time), i2(n, u.time);
    const double c = -1.0 / two_pi;
    for (int k = -n; k <= n; ++k) {
        cplx acc1(0.0, 0.0);
        for (int k1 = -n; k1 <= n; ++k1) {
            for (int k2 = -n; k2 <= n; ++k2) {
                const int k3 = k - k1 - k2;
                if (k3 < -n || k3 > n) continue;
                if ((k1 + k2) == 0 || (k2 + k3) == 0) continue;
                acc1 += static_cast<double>(k1 + k2) * u.at(k1) * std::conj(u.at(-k2)) * u.at(k3);
            }
        }
        i1.at(k) = c * acc1;

        // On k2+k3 = 0 the triple collapses to k1 = k, k3 = -k2.
        cplx acc2(0.0, 0.0);
        for (int k2 = -n; k2 <= n; ++k2) {
            if (k + k2 == 0) continue;
            acc2 += static_cast<double>(k + k2) * u.at(k) * std::conj(u.at(-k2)) * u.at(-k2);
        }
        i2.at(k) = c * acc2;
    }
    return {i1, i2};
}

// Closed form of the resonant part: mode k carries
//   [(-k ||u||^2 + sum_{k'} k' |uhat(k')|^2) / 2pi] uhat(k).
inline SpectralState i2_closed_form(const SpectralState& u) {
    double l2sq = 0.0;
    for (int k = -u.trunc; k <= u.trunc; ++k) l2sq += std::norm(u.at(k));
    const double mom = momentum(u);
    SpectralState out(u.trunc, u.time);
    for (int k = -u.trunc; k <= u.trunc; ++k)
        out.at(k) = ((-static_cast<double>(k) * l2sq + mom) / two_pi) * u.at(k);
    return out;
}

} // namespace t3nls
