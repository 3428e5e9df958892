#pragma once

// Fourier-side representation of periodic functions on the torus [0, 2pi):
// truncated coefficient vectors, norms, projectors, derivatives, the free
// propagator, and alias-free cubic convolution.
//
// Conventions: u(x) = (2pi)^{-1/2} sum_k uhat(k) e^{ikx}, so that
// ||u||_L2 = ||uhat||_l2 and (fg)^(k) = (2pi)^{-1/2} (fhat * ghat)(k).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "t3nls/errors.hpp"
#include "t3nls/fft.hpp"

namespace t3nls {

inline constexpr double two_pi = 6.28318530717958647692528676655900577;

// Truncated spectrum of a function at one time instant. Slot i holds mode
// k = i - trunc, for k in [-N, N].
struct SpectralState {
    std::vector<cplx> coeffs;
    int trunc = 0;   // N, maximum retained mode
    double time = 0.0;

    SpectralState() = default;
    explicit SpectralState(int n, double t = 0.0)
        : coeffs(static_cast<std::size_t>(2 * n + 1)), trunc(n), time(t) {
        if (n < 0) throw invalid_parameters("SpectralState: negative truncation");
    }

    int size() const { return 2 * trunc + 1; }

    cplx& at(int k) { return coeffs[static_cast<std::size_t>(k + trunc)]; }
    const cplx& at(int k) const { return coeffs[static_cast<std::size_t>(k + trunc)]; }
};

inline void require_same_trunc(const SpectralState& a, const SpectralState& b) {
    if (a.trunc != b.trunc)
        throw truncation_mismatch("states disagree on truncation: " + std::to_string(a.trunc) +
                                  " vs " + std::to_string(b.trunc));
}

inline bool all_finite(const SpectralState& s) {
    for (const cplx& c : s.coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

inline SpectralState operator+(const SpectralState& a, const SpectralState& b) {
    require_same_trunc(a, b);
    SpectralState out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
    return out;
}

inline SpectralState operator-(const SpectralState& a, const SpectralState& b) {
    require_same_trunc(a, b);
    SpectralState out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
    return out;
}

inline SpectralState operator*(const cplx& z, const SpectralState& a) {
    SpectralState out = a;
    for (cplx& c : out.coeffs) c *= z;
    return out;
}

// The five real coefficients of the equation
//   du/dt = a1 uxxx + i a2 uxx + i g1 |u|^2 u + g2 (|u|^2 u)_x - i G u (|u|^2)_x.
struct EquationParams {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double Gamma = 0.0;

    friend bool operator==(const EquationParams&, const EquationParams&) = default;

    // Nonresonance assumption: Gamma > 0, alpha1 != 0, 2*alpha2/(3*alpha1) not an
    // integer (tested on the fractional part with absolute tolerance `tol`).
    // Construction never rejects parameters; the analytic solver runs without it.
    bool satisfies_nonresonance(double tol = 1e-12) const {
        if (!(Gamma > 0.0) || alpha1 == 0.0) return false;
        double q = 2.0 * alpha2 / (3.0 * alpha1);
        return std::abs(q - std::nearbyint(q)) > tol;
    }
};

// ---------------------------------------------------------------------------
// Norms and scalar functionals. Reductions run over ascending k, left to
// right; this order is part of the determinism contract.

inline double l2_norm(const SpectralState& s) {
    double acc = 0.0;
    for (int k = -s.trunc; k <= s.trunc; ++k) acc += std::norm(s.at(k));
    return std::sqrt(acc);
}

inline double hs_norm(const SpectralState& s, double order) {
    double acc = 0.0;
    for (int k = -s.trunc; k <= s.trunc; ++k) {
        double w = std::pow(1.0 + std::abs(static_cast<double>(k)), order);
        acc += w * w * std::norm(s.at(k));
    }
    return std::sqrt(acc);
}

// l1 norm with weight e^{r|k|}. Members of this space extend analytically to
// a strip of half-width r. Guard: r*N <= 300 keeps e^{rN} inside double range.
inline double ar_norm(const SpectralState& s, double r) {
    if (!(r > 0.0)) throw invalid_parameters("ar_norm: radius must be positive");
    if (r * s.trunc > 300.0)
        throw weight_overflow("ar_norm: r*N = " + std::to_string(r * s.trunc) + " exceeds 300");
    double acc = 0.0;
    for (int k = -s.trunc; k <= s.trunc; ++k)
        acc += std::exp(r * std::abs(static_cast<double>(k))) * std::abs(s.at(k));
    return acc;
}

inline double momentum(const SpectralState& s) {
    double acc = 0.0;
    for (int k = -s.trunc; k <= s.trunc; ++k) acc += static_cast<double>(k) * std::norm(s.at(k));
    return acc;
}

// Spectrum of the complex conjugate: (conj u)^(k) = conj(uhat(-k)).
inline SpectralState conjugate_state(const SpectralState& s) {
    SpectralState out(s.trunc, s.time);
    for (int k = -s.trunc; k <= s.trunc; ++k) out.at(k) = std::conj(s.at(-k));
    return out;
}

inline SpectralState derivative(const SpectralState& s, int order) {
    if (order < 0) throw invalid_parameters("derivative: order must be nonnegative");
    SpectralState out(s.trunc, s.time);
    for (int k = -s.trunc; k <= s.trunc; ++k) {
        cplx f(1.0, 0.0);
        const cplx ik(0.0, static_cast<double>(k));
        for (int p = 0; p < order; ++p) f *= ik;
        out.at(k) = f * s.at(k);
    }
    return out;
}

// Zero-mean antiderivative: multiplies by 1/(ik) for k != 0 and drops mode 0.
inline SpectralState antiderivative(const SpectralState& s) {
    SpectralState out(s.trunc, s.time);
    for (int k = -s.trunc; k <= s.trunc; ++k) {
        if (k == 0) { out.at(k) = 0.0; continue; }
        out.at(k) = s.at(k) / cplx(0.0, static_cast<double>(k));
    }
    return out;
}

enum class Projector { PlusModes, MinusModes, ZeroMode, NonzeroModes };

inline SpectralState project(const SpectralState& s, Projector which) {
    SpectralState out(s.trunc, s.time);
    for (int k = -s.trunc; k <= s.trunc; ++k) {
        bool keep = false;
        switch (which) {
            case Projector::PlusModes:    keep = k > 0; break;
            case Projector::MinusModes:   keep = k < 0; break;
            case Projector::ZeroMode:     keep = k == 0; break;
            case Projector::NonzeroModes: keep = k != 0; break;
        }
        out.at(k) = keep ? s.at(k) : cplx(0.0, 0.0);
    }
    return out;
}

// Free propagator of the linear flow: mode k picks up e^{-i(a1 k^3 + a2 k^2) dt}.
// Unimodular, so every |uhat(k)| is preserved up to rounding.
inline SpectralState linear_propagator(const SpectralState& s, const EquationParams& p, double dt) {
    SpectralState out(s.trunc, s.time + dt);
    for (int k = -s.trunc; k <= s.trunc; ++k) {
        double kk = static_cast<double>(k);
        double phase = -(p.alpha1 * kk * kk * kk + p.alpha2 * kk * kk) * dt;
        out.at(k) = std::polar(1.0, phase) * s.at(k);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grid plumbing shared by the fast convolution path and the gauge machinery.

namespace detail {

// Unscaled samples G_j = sum_k chat(k) e^{ikx_j} on x_j = 2pi j / M.
inline std::vector<cplx> to_grid(const SpectralState& s, std::size_t m) {
    std::vector<cplx> a(m, cplx(0.0, 0.0));
    for (int k = -s.trunc; k <= s.trunc; ++k) {
        std::size_t idx = static_cast<std::size_t>((k % static_cast<int>(m) + static_cast<int>(m)) % static_cast<int>(m));
        a[idx] += s.at(k);
    }
    fft_pow2(a, +1);
    return a;
}

// Inverse of to_grid up to the 1/M normalization: extracts modes |k| <= out_trunc.
inline SpectralState spectrum_from_grid(std::vector<cplx> grid, int out_trunc, double time) {
    const std::size_t m = grid.size();
    fft_pow2(grid, -1);
    SpectralState out(out_trunc, time);
    for (int k = -out_trunc; k <= out_trunc; ++k) {
        std::size_t idx = static_cast<std::size_t>((k % static_cast<int>(m) + static_cast<int>(m)) % static_cast<int>(m));
        out.at(k) = grid[idx] / static_cast<double>(m);
    }
    return out;
}

// Pointwise product of two functions, returned as the spectrum of a*b (or
// a*conj(b)) truncated to |k| <= out_trunc, computed alias-free.
inline SpectralState multiply(const SpectralState& a, const SpectralState& b, int out_trunc,
                              bool conj_b = false) {
    std::size_t m = next_pow2(static_cast<std::size_t>(a.trunc + b.trunc + out_trunc + 2));
    std::vector<cplx> ga = to_grid(a, m);
    std::vector<cplx> gb = to_grid(b, m);
    for (std::size_t j = 0; j < m; ++j) {
        cplx vb = conj_b ? std::conj(gb[j]) : gb[j];
        ga[j] *= vb / std::sqrt(two_pi);
    }
    return spectrum_from_grid(std::move(ga), out_trunc, a.time);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Alias-free cubic convolution
//   out(k) = sum_{k1+k2+k3=k, |kj|<=N} weight(k1,k2,k3) u1hat(k1) conj(u2hat(-k2)) u3hat(k3).
//
// The fast transform path supports weights that factor as
//   scale * k^out_power * (k1+k2)^pair_power;
// the constant, k and (k1+k2) weights of the equation's right-hand side are
// all of this form. Region-masked sums must use the direct path.

struct FactoredWeight {
    cplx scale = cplx(1.0, 0.0);
    int out_power = 0;   // power of k = k1+k2+k3
    int pair_power = 0;  // power of (k1+k2)
};

template <class WeightFn>
SpectralState cubic_product_direct(const SpectralState& u1, const SpectralState& u2,
                                   const SpectralState& u3, WeightFn&& weight) {
    require_same_trunc(u1, u2);
    require_same_trunc(u1, u3);
    const int n = u1.trunc;
    SpectralState out(n, u1.time);
    for (int k = -n; k <= n; ++k) {
        cplx acc(0.0, 0.0);
        for (int k1 = -n; k1 <= n; ++k1) {
            for (int k2 = -n; k2 <= n; ++k2) {
                const int k3 = k - k1 - k2;
                if (k3 < -n || k3 > n) continue;
                cplx w = weight(k1, k2, k3);
                if (w == cplx(0.0, 0.0)) continue;
                acc += w * u1.at(k1) * std::conj(u2.at(-k2)) * u3.at(k3);
            }
        }
        out.at(k) = acc;
    }
    return out;
}

// Fast path: zero-padded transforms on a grid of at least 4N+2 points, so no
// output mode |k| <= N is aliased by the degree-3N product.
inline SpectralState cubic_product(const SpectralState& u1, const SpectralState& u2,
                                   const SpectralState& u3, const FactoredWeight& w) {
    require_same_trunc(u1, u2);
    require_same_trunc(u1, u3);
    const int n = u1.trunc;
    const std::size_t m = next_pow2(static_cast<std::size_t>(4 * n + 2));

    std::vector<cplx> g1 = detail::to_grid(u1, m);
    std::vector<cplx> g2 = (&u2 == &u1) ? g1 : detail::to_grid(u2, m);
    for (cplx& v : g2) v = std::conj(v);
    std::vector<cplx> g3 = (&u3 == &u1) ? g1 : detail::to_grid(u3, m);

    std::vector<cplx> prod(m);
    if (w.pair_power == 0) {
        for (std::size_t j = 0; j < m; ++j) prod[j] = g1[j] * g2[j] * g3[j];
    } else {
        // (k1+k2)^q acts on the pair spectrum of u1 * conj(u2).
        std::vector<cplx> pair(m);
        for (std::size_t j = 0; j < m; ++j) pair[j] = g1[j] * g2[j];
        detail::fft_pow2(pair, -1);
        for (std::size_t j = 0; j < m; ++j) pair[j] /= static_cast<double>(m);
        std::vector<cplx> weighted(m, cplx(0.0, 0.0));
        const int pmax = 2 * n;
        for (int s = -pmax; s <= pmax; ++s) {
            std::size_t idx = static_cast<std::size_t>((s % static_cast<int>(m) + static_cast<int>(m)) % static_cast<int>(m));
            double f = 1.0;
            for (int p = 0; p < w.pair_power; ++p) f *= static_cast<double>(s);
            weighted[idx] = f * pair[idx];
        }
        detail::fft_pow2(weighted, +1);
        for (std::size_t j = 0; j < m; ++j) prod[j] = weighted[j] * g3[j];
    }

    detail::fft_pow2(prod, -1);
    SpectralState out(n, u1.time);
    for (int k = -n; k <= n; ++k) {
        std::size_t idx = static_cast<std::size_t>((k % static_cast<int>(m) + static_cast<int>(m)) % static_cast<int>(m));
        double f = 1.0;
        for (int p = 0; p < w.out_power; ++p) f *= static_cast<double>(k);
        out.at(k) = w.scale * f * prod[idx] / static_cast<double>(m);
    }
    if (!all_finite(out)) throw blow_up_error("cubic_product: non-finite coefficient");
    return out;
}

} // namespace t3nls
