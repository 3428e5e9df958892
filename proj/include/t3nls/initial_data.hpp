#pragma once

// Initial-data families used by the experiments: lacunary data supported on
// the dyadic modes, and the two small analytic perturbations built from a
// constant plus one high carrier mode.

#include <cmath>
#include <optional>

#include "t3nls/spectral.hpp"

namespace t3nls {

// uhat0(k) = (1+|k|)^{-s0} at k = +-2^j (2^j <= N), zero elsewhere.
inline SpectralState lacunary_data(double s0, int n) {
    if (!(s0 > 0.5)) throw invalid_parameters("lacunary_data: s0 must exceed 1/2");
    if (n < 2) throw invalid_parameters("lacunary_data: need N >= 2");
    SpectralState out(n);
    for (long k = 1; k <= n; k *= 2) {
        double amp = std::pow(1.0 + static_cast<double>(k), -s0);
        out.at(static_cast<int>(k)) = amp;
        out.at(static_cast<int>(-k)) = amp;
    }
    return out;
}

// sigma(s) = (2/3)s - 1/2 on [1, 5/4], then 1/3; written as (4s-3)/6 so the
// pinned values 1/6 and 1/3 come out exact.
inline double sigma_exponent(double s) {
    if (!(s >= 1.0)) throw invalid_parameters("sigma_exponent: s must be >= 1");
    if (s <= 1.25) return (4.0 * s - 3.0) / 6.0;
    return 1.0 / 3.0;
}

// psi = <k0>^{-sigma(s)} + (eps/sqrt(4pi)) <k0>^{-s} e^{i k0 x}.
inline SpectralState inflation_psi(double s, double eps, int k0, int n) {
    if (!(s >= 1.0)) throw invalid_parameters("inflation_psi: s must be >= 1");
    if (k0 <= 0 || k0 > n) throw invalid_parameters("inflation_psi: need 0 < k0 <= N");
    const double bracket = 1.0 + static_cast<double>(k0);
    SpectralState out(n);
    out.at(0) = std::sqrt(two_pi) * std::pow(bracket, -sigma_exponent(s));
    out.at(k0) = (eps / std::sqrt(2.0)) * std::pow(bracket, -s);
    return out;
}

// phi = (eps/sqrt(4pi)) (1 + <k0>^{-s} e^{i k0 x}); its H^s norm is exactly eps.
inline SpectralState perturbation_phi(double s, double eps, int k0, int n) {
    if (!(s >= 1.0)) throw invalid_parameters("perturbation_phi: s must be >= 1");
    if (k0 <= 0 || k0 > n) throw invalid_parameters("perturbation_phi: need 0 < k0 <= N");
    const double bracket = 1.0 + static_cast<double>(k0);
    SpectralState out(n);
    out.at(0) = eps / std::sqrt(2.0);
    out.at(k0) = (eps / std::sqrt(2.0)) * std::pow(bracket, -s);
    return out;
}

// Smallest carrier frequency for which ||psi||_{H^s} <= eps, if one exists
// within the truncation ("sufficiently large k0" resolved by explicit search).
inline std::optional<int> min_k0_for_hs_bound(double s, double eps, int n) {
    for (int k0 = 1; k0 <= n; ++k0) {
        SpectralState psi = inflation_psi(s, eps, k0, n);
        if (hs_norm(psi, s) <= eps) return k0;
    }
    return std::nullopt;
}

} // namespace t3nls
