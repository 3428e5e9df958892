#pragma once

// Reduced-equation machinery: the v/w changes of variables, the operator
// families acting on w (interaction sums weighted by the resonance phase,
// with and without the 1/(i Phi) integrating factor), the integrated-in-time
// identities recovering the initial datum, the per-mode growth-rate
// predictor, and the gauge transformation for the alpha1 = 0 equation.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <utility>
#include <vector>

#include "t3nls/integrator.hpp"
#include "t3nls/nonlinear.hpp"
#include "t3nls/quadrature.hpp"
#include "t3nls/spectral.hpp"

namespace t3nls {

// Shared data of one reduced-equation run: the coefficients, the (conserved)
// initial L2 norm, and the drift coefficient a = Gamma ||u0||^2 / (2pi) that
// amplifies positive modes forward in time.
struct ReducedContext {
    EquationParams params;
    double l2_initial = 0.0;
    double drift_a = 0.0;

    ReducedContext() = default;
    ReducedContext(const EquationParams& p, double l2_init)
        : params(p), l2_initial(l2_init), drift_a(p.Gamma * l2_init * l2_init / two_pi) {}

    static ReducedContext from_data(const EquationParams& p, const SpectralState& u0) {
        return ReducedContext(p, l2_norm(u0));
    }
};

// ---------------------------------------------------------------------------
// Changes of variables. Both are unimodular mode-wise, so |what| = |vhat| = |uhat|.

// vhat(k) = e^{+i(a1 k^3 + a2 k^2) t} uhat(k): removes the linear dispersion phase.
inline SpectralState to_v(const SpectralState& u, const EquationParams& p, double t) {
    SpectralState out(u.trunc, u.time);
    for (int k = -u.trunc; k <= u.trunc; ++k) {
        double kk = static_cast<double>(k);
        out.at(k) = std::polar(1.0, (p.alpha1 * kk * kk * kk + p.alpha2 * kk * kk) * t) * u.at(k);
    }
    return out;
}

inline SpectralState from_v(const SpectralState& v, const EquationParams& p, double t) {
    SpectralState out(v.trunc, v.time);
    for (int k = -v.trunc; k <= v.trunc; ++k) {
        double kk = static_cast<double>(k);
        out.at(k) = std::polar(1.0, -(p.alpha1 * kk * kk * kk + p.alpha2 * kk * kk) * t) * v.at(k);
    }
    return out;
}

// what(k) = e^{-i (g1 + g2 k) ||u0||^2 t / pi} vhat(k): removes the resonant
// Kerr/self-steepening phases.
inline SpectralState to_w(const SpectralState& v, const ReducedContext& ctx, double t) {
    SpectralState out(v.trunc, v.time);
    const double l2sq = ctx.l2_initial * ctx.l2_initial;
    for (int k = -v.trunc; k <= v.trunc; ++k) {
        double rate = (ctx.params.gamma1 + ctx.params.gamma2 * static_cast<double>(k)) * l2sq / (two_pi / 2.0);
        out.at(k) = std::polar(1.0, -rate * t) * v.at(k);
    }
    return out;
}

inline SpectralState from_w(const SpectralState& w, const ReducedContext& ctx, double t) {
    SpectralState out(w.trunc, w.time);
    const double l2sq = ctx.l2_initial * ctx.l2_initial;
    for (int k = -w.trunc; k <= w.trunc; ++k) {
        double rate = (ctx.params.gamma1 + ctx.params.gamma2 * static_cast<double>(k)) * l2sq / (two_pi / 2.0);
        out.at(k) = std::polar(1.0, rate * t) * w.at(k);
    }
    return out;
}

inline SpectralState u_to_w(const SpectralState& u, const ReducedContext& ctx, double t) {
    return to_w(to_v(u, ctx.params, t), ctx, t);
}

inline SpectralState w_to_u(const SpectralState& w, const ReducedContext& ctx, double t) {
    return from_v(from_w(w, ctx, t), ctx.params, t);
}

// ---------------------------------------------------------------------------
// Fused interaction sweeps. Every operator below is a sum over the
// nonresonant set D(k) = {k1+k2+k3 = k, (k1+k2)(k2+k3) != 0} restricted to
// |kj| <= N, with the phase e^{it Phi}. The sweep walks triples in a fixed
// order (k, then k1, then k2, ascending) and accumulates whichever outputs
// were requested, so one pass serves the whole family deterministically.

namespace detail {

// e^{it Phi} with Phi = 3 a1 m + 2 a2 n, m = s12 s23 (k1+k3), n = s12 s23.
// Power tables make the per-triple phase two table lookups and one multiply;
// beyond the table budget it falls back to polar().
struct PhaseEval {
    double coef_m = 0.0;  // 3 a1 t
    double coef_n = 0.0;  // 2 a2 t
    double a1_3 = 0.0;    // 3 a1
    double a2_2 = 0.0;    // 2 a2
    bool tabulated = false;
    std::vector<cplx> pow_m, pow_n;

    PhaseEval(const EquationParams& p, double t, int n_trunc) {
        a1_3 = 3.0 * p.alpha1;
        a2_2 = 2.0 * p.alpha2;
        coef_m = a1_3 * t;
        coef_n = a2_2 * t;
        if (n_trunc <= 48) {
            tabulated = true;
            const long nn = n_trunc;
            fill(pow_m, 8 * nn * nn * nn, coef_m);
            fill(pow_n, 4 * nn * nn, coef_n);
        }
    }

    static void fill(std::vector<cplx>& table, long max_abs, double theta) {
        table.resize(static_cast<std::size_t>(max_abs) + 1);
        const cplx step = std::polar(1.0, theta);
        table[0] = cplx(1.0, 0.0);
        for (long j = 1; j <= max_abs; ++j) {
            if (j % 1024 == 0)
                table[static_cast<std::size_t>(j)] = std::polar(1.0, theta * static_cast<double>(j));
            else
                table[static_cast<std::size_t>(j)] = table[static_cast<std::size_t>(j - 1)] * step;
        }
    }

    double phi(long m, long n) const {
        return a1_3 * static_cast<double>(m) + a2_2 * static_cast<double>(n);
    }

    cplx phase(long m, long n) const {
        if (!tabulated)
            return std::polar(1.0, coef_m * static_cast<double>(m) + coef_n * static_cast<double>(n));
        cplx a = m >= 0 ? pow_m[static_cast<std::size_t>(m)] : std::conj(pow_m[static_cast<std::size_t>(-m)]);
        cplx b = n >= 0 ? pow_n[static_cast<std::size_t>(n)] : std::conj(pow_n[static_cast<std::size_t>(-n)]);
        return a * b;
    }
};

struct ReducedSweepRequest {
    bool f2 = false;        // i g1 / 2pi over D
    bool f31 = false;       // (i g2 k + G s12) / 2pi over D1
    bool f32 = false;       // same weight over D2
    bool g = false;         // F32 weight / (i Phi) over D2
    bool gt = false;        // full weight / (i Phi) over D2
    bool ft_d1 = false;     // full weight over D1
    bool f32_full = false;  // full weight over D2
    double cutoff = 0.0;    // relative amplitude cutoff (0 = literal full sum)
};

struct ReducedSweepOut {
    SpectralState f2, f31, f32, g, gt, ft_d1, f32_full;
};

inline ReducedSweepOut reduced_sweep(const SpectralState& w, const EquationParams& p, double t,
                                     const ReducedSweepRequest& req) {
    const int n = w.trunc;
    ReducedSweepOut out;
    for (SpectralState* s : {&out.f2, &out.f31, &out.f32, &out.g, &out.gt, &out.ft_d1, &out.f32_full})
        *s = SpectralState(n, w.time);

    const bool need_div = req.g || req.gt;
    const cplx w_kerr(0.0, p.gamma1 / two_pi);
    PhaseEval ph(p, t, n);

    std::vector<double> absw(static_cast<std::size_t>(2 * n + 1));
    double max_abs = 0.0;
    for (int k = -n; k <= n; ++k) {
        absw[static_cast<std::size_t>(k + n)] = std::abs(w.at(k));
        max_abs = std::max(max_abs, absw[static_cast<std::size_t>(k + n)]);
    }
    const double floor_abs = req.cutoff * max_abs * max_abs * max_abs;

    for (int k = -n; k <= n; ++k) {
        const cplx w_deriv(0.0, p.gamma2 * static_cast<double>(k) / two_pi);
        cplx acc_f2(0), acc_f31(0), acc_f32(0), acc_g(0), acc_gt(0), acc_ft(0), acc_f32f(0);
        for (int k1 = -n; k1 <= n; ++k1) {
            for (int k2 = -n; k2 <= n; ++k2) {
                const int k3 = k - k1 - k2;
                if (k3 < -n || k3 > n) continue;
                const long s12 = k1 + k2, s23 = k2 + k3;
                if (s12 == 0 || s23 == 0) continue;
                if (absw[static_cast<std::size_t>(k1 + n)] * absw[static_cast<std::size_t>(-k2 + n)] *
                        absw[static_cast<std::size_t>(k3 + n)] < floor_abs)
                    continue;

                const cplx triple = w.at(k1) * std::conj(w.at(-k2)) * w.at(k3);
                const long nn = s12 * s23;
                const long mm = nn * (k1 + k3);
                const cplx e = ph.phase(mm, nn) * triple;
                const cplx w3 = w_deriv + cplx(p.Gamma * static_cast<double>(s12) / two_pi, 0.0);

                if (req.f2) acc_f2 += w_kerr * e;

                if (in_d1(k1, k2, k3)) {
                    if (req.f31) acc_f31 += w3 * e;
                    if (req.ft_d1) acc_ft += (w_kerr + w3) * e;
                } else {
                    if (req.f32) acc_f32 += w3 * e;
                    if (req.f32_full) acc_f32f += (w_kerr + w3) * e;
                    if (need_div) {
                        const double phi = ph.phi(mm, nn);
                        if (std::abs(phi) < 1e-12)
                            throw invalid_parameters("reduced operators: vanishing phase in D2 "
                                                     "(nonresonance assumption violated)");
                        const cplx inv_iphi = cplx(0.0, -1.0 / phi);
                        if (req.g) acc_g += w3 * inv_iphi * e;
                        if (req.gt) acc_gt += (w_kerr + w3) * inv_iphi * e;
                    }
                }
            }
        }
        if (req.f2) out.f2.at(k) = acc_f2;
        if (req.f31) out.f31.at(k) = acc_f31;
        if (req.f32) out.f32.at(k) = acc_f32;
        if (req.g) out.g.at(k) = acc_g;
        if (req.gt) out.gt.at(k) = acc_gt;
        if (req.ft_d1) out.ft_d1.at(k) = acc_ft;
        if (req.f32_full) out.f32_full.at(k) = acc_f32f;
    }
    return out;
}

struct HSweepRequest {
    bool h = false;         // derivative-weight numerator, all three product-rule slots
    bool ht_split = false;  // full numerator, split into dominant-slot part and remainder
    double cutoff = 0.0;
};

struct HSweepOut {
    SpectralState h, ht1, ht2;
};

// Product-rule sums over D2 with the 1/(i Phi) factor. wdot must be the full
// reduced-equation time derivative at (w, t); it is supplied, not recomputed.
inline HSweepOut h_sweep(const SpectralState& w, const SpectralState& wdot,
                         const EquationParams& p, double t, const HSweepRequest& req) {
    require_same_trunc(w, wdot);
    const int n = w.trunc;
    HSweepOut out;
    for (SpectralState* s : {&out.h, &out.ht1, &out.ht2}) *s = SpectralState(n, w.time);

    const cplx w_kerr(0.0, p.gamma1 / two_pi);
    PhaseEval ph(p, t, n);

    std::vector<double> bound(static_cast<std::size_t>(2 * n + 1));
    double max_b = 0.0;
    for (int k = -n; k <= n; ++k) {
        bound[static_cast<std::size_t>(k + n)] = std::max(std::abs(w.at(k)), std::abs(wdot.at(k)));
        max_b = std::max(max_b, bound[static_cast<std::size_t>(k + n)]);
    }
    const double floor_abs = req.cutoff * max_b * max_b * max_b;

    for (int k = -n; k <= n; ++k) {
        const cplx w_deriv(0.0, p.gamma2 * static_cast<double>(k) / two_pi);
        cplx acc_h(0), acc_h1(0), acc_h2(0);
        for (int k1 = -n; k1 <= n; ++k1) {
            for (int k2 = -n; k2 <= n; ++k2) {
                const int k3 = k - k1 - k2;
                if (k3 < -n || k3 > n) continue;
                const long s12 = k1 + k2, s23 = k2 + k3;
                if (s12 == 0 || s23 == 0) continue;
                if (in_d1(k1, k2, k3)) continue;
                if (bound[static_cast<std::size_t>(k1 + n)] * bound[static_cast<std::size_t>(-k2 + n)] *
                        bound[static_cast<std::size_t>(k3 + n)] < floor_abs)
                    continue;

                const long nn = s12 * s23;
                const long mm = nn * (k1 + k3);
                const double phi = ph.phi(mm, nn);
                if (std::abs(phi) < 1e-12)
                    throw invalid_parameters("reduced operators: vanishing phase in D2 "
                                             "(nonresonance assumption violated)");
                const cplx q = ph.phase(mm, nn) * cplx(0.0, -1.0 / phi);
                const cplx w3 = w_deriv + cplx(p.Gamma * static_cast<double>(s12) / two_pi, 0.0);

                const cplx a = w.at(k1), b = std::conj(w.at(-k2)), c = w.at(k3);
                const cplx da = wdot.at(k1), db = std::conj(wdot.at(-k2)), dc = wdot.at(k3);
                const cplx d1 = da * b * c, d2 = a * db * c, d3 = a * b * dc;

                if (req.h) acc_h -= w3 * q * (d1 + d2 + d3);
                if (req.ht_split) {
                    const cplx wf = (w_kerr + w3) * q;
                    const int slot = d2_dominant_slot(k1, k2, k3);
                    acc_h1 -= wf * (slot == 1 ? d1 : (slot == 2 ? d2 : (slot == 3 ? d3 : cplx(0.0))));
                    cplx rest(0.0);
                    if (slot != 1) rest += d1;
                    if (slot != 2) rest += d2;
                    if (slot != 3) rest += d3;
                    acc_h2 -= wf * rest;
                }
            }
        }
        if (req.h) out.h.at(k) = acc_h;
        if (req.ht_split) { out.ht1.at(k) = acc_h1; out.ht2.at(k) = acc_h2; }
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Right-hand side of the reduced equation in w variables:
//   dwhat/dt (k) = a k what(k) + F1 + F2 + F3_1 + F3_2,
// where F1 collects the remaining resonant (diagonal) terms and F2, F3 the
// nonresonant interaction sums split by region.

struct RhsWParts {
    SpectralState total, drift, F1, F2, F3_1, F3_2;
};

inline RhsWParts rhs_w(const SpectralState& w, const ReducedContext& ctx, double t) {
    const int n = w.trunc;
    const EquationParams& p = ctx.params;

    detail::ReducedSweepRequest req;
    req.f2 = req.f31 = req.f32 = true;
    detail::ReducedSweepOut sw = detail::reduced_sweep(w, p, t, req);

    RhsWParts parts;
    parts.F2 = std::move(sw.f2);
    parts.F3_1 = std::move(sw.f31);
    parts.F3_2 = std::move(sw.f32);
    parts.drift = SpectralState(n, w.time);
    parts.F1 = SpectralState(n, w.time);

    const double mom = momentum(w);
    for (int k = -n; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        parts.drift.at(k) = ctx.drift_a * kk * w.at(k);
        parts.F1.at(k) = -(p.Gamma / two_pi) * mom * w.at(k) -
                         cplx(0.0, (p.gamma1 + p.gamma2 * kk) / two_pi) * std::norm(w.at(k)) * w.at(k);
    }
    parts.total = parts.drift + parts.F1 + parts.F2 + parts.F3_1 + parts.F3_2;
    return parts;
}

// Momentum-corrected grouping of the same right-hand side:
//   dwhat/dt (k) = (G/2pi)(||u0||^2 k - P[w]) what(k) + Ftilde + F32_full,
// where Ftilde keeps the comparable-frequency interactions plus the diagonal
// Kerr term and F32_full carries the full weight over D2.
struct RhsWRefined {
    SpectralState total, drift_t, Ftilde, F32_full;
};

inline RhsWRefined rhs_w_refined(const SpectralState& w, const ReducedContext& ctx, double t) {
    const int n = w.trunc;
    const EquationParams& p = ctx.params;

    detail::ReducedSweepRequest req;
    req.ft_d1 = req.f32_full = true;
    detail::ReducedSweepOut sw = detail::reduced_sweep(w, p, t, req);

    RhsWRefined parts;
    parts.F32_full = std::move(sw.f32_full);
    parts.drift_t = SpectralState(n, w.time);
    parts.Ftilde = std::move(sw.ft_d1);

    const double mom = momentum(w);
    const double l2sq = ctx.l2_initial * ctx.l2_initial;
    for (int k = -n; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        parts.drift_t.at(k) = (p.Gamma / two_pi) * (l2sq * kk - mom) * w.at(k);
        parts.Ftilde.at(k) -= cplx(0.0, (p.gamma1 + p.gamma2 * kk) / two_pi) * std::norm(w.at(k)) * w.at(k);
    }
    parts.total = parts.drift_t + parts.Ftilde + parts.F32_full;
    return parts;
}

// Integrating-factor primitives over D2. compute_G carries the derivative
// weights only; compute_Gtilde additionally carries the Kerr weight.
inline SpectralState compute_G(const SpectralState& w, const ReducedContext& ctx, double t) {
    detail::ReducedSweepRequest req;
    req.g = true;
    return detail::reduced_sweep(w, ctx.params, t, req).g;
}

inline SpectralState compute_Gtilde(const SpectralState& w, const ReducedContext& ctx, double t) {
    detail::ReducedSweepRequest req;
    req.gt = true;
    return detail::reduced_sweep(w, ctx.params, t, req).gt;
}

inline SpectralState compute_H(const SpectralState& w, const SpectralState& wdot,
                               const ReducedContext& ctx, double t) {
    detail::HSweepRequest req;
    req.h = true;
    return detail::h_sweep(w, wdot, ctx.params, t, req).h;
}

// Splits the product-rule sum by where the time derivative falls: Ht1 keeps
// the derivative-on-dominant-frequency terms over the D2_j sets, Ht2 the rest.
inline std::pair<SpectralState, SpectralState> compute_H1_H2(const SpectralState& w,
                                                             const SpectralState& wdot,
                                                             const ReducedContext& ctx, double t) {
    detail::HSweepRequest req;
    req.ht_split = true;
    detail::HSweepOut out = detail::h_sweep(w, wdot, ctx.params, t, req);
    return {std::move(out.ht1), std::move(out.ht2)};
}

// ---------------------------------------------------------------------------
// Integrated-in-time identities: the initial datum recovered from the
// trajectory through the drift kernel, either the plain one e^{-akt} or the
// momentum-corrected kernel e^{-(G/2pi) int (||u0||^2 k - P)}.

enum class DuhamelVersion { PlainDrift, MomentumCorrected };

struct DuhamelResult {
    int trunc = 0;
    std::vector<double> residual;  // |uhat0(k) - RHS(k)|, slot k + trunc
    std::vector<char> cond_ok;     // momentum-corrected validity condition per mode

    double residual_at(int k) const { return residual[static_cast<std::size_t>(k + trunc)]; }
    bool cond_at(int k) const { return cond_ok[static_cast<std::size_t>(k + trunc)] != 0; }

    double max_residual(int kmin, int kmax) const {
        double m = 0.0;
        for (int k = kmin; k <= kmax; ++k) m = std::max(m, residual_at(k));
        return m;
    }
};

inline DuhamelResult duhamel_residual(const Trajectory& traj, const ReducedContext& ctx,
                                      DuhamelVersion version) {
    if (ctx.l2_initial == 0.0)
        throw zero_data_error("duhamel_residual: identity requires a positive drift coefficient");
    if (traj.size() < 3 || !(traj.dt > 0.0))
        throw invalid_parameters("duhamel_residual: need a forward trajectory with at least 3 nodes");

    const EquationParams& p = ctx.params;
    const int n = traj.state(0).trunc;
    const std::size_t nodes = traj.size();
    const double h = traj.dt;
    const double t0 = traj.state(0).time;
    const double big_t = traj.state(nodes - 1).time - t0;
    const double l2sq = ctx.l2_initial * ctx.l2_initial;

    if (ctx.drift_a * n * big_t > 300.0)
        throw weight_overflow("duhamel_residual: drift kernel exponent exceeds 300");

    const std::vector<double> qw = composite_simpson_weights(nodes, h);

    // momentum along the trajectory and its running integral (corrected kernel)
    std::vector<double> mom(nodes, 0.0), mom_int(nodes, 0.0);
    double sup_h12_sq = 0.0;
    if (version == DuhamelVersion::MomentumCorrected) {
        for (std::size_t j = 0; j < nodes; ++j) {
            mom[j] = momentum(traj.state(j));
            double h12 = hs_norm(traj.state(j), 0.5);
            sup_h12_sq = std::max(sup_h12_sq, h12 * h12);
        }
        mom_int = cumulative_integral(mom, h);
    }

    const double cutoff = 1e-18;
    SpectralState acc(n);        // running quadrature sum of the integrand
    SpectralState g_first(n), g_last(n), w_last(n);

    for (std::size_t j = 0; j < nodes; ++j) {
        const SpectralState& uj = traj.state(j);
        const double tj = uj.time - t0;
        SpectralState wj = u_to_w(uj, ctx, tj);

        detail::ReducedSweepRequest req;
        req.f2 = req.f31 = req.f32 = true;  // always needed for wdot
        req.cutoff = cutoff;
        if (version == DuhamelVersion::PlainDrift) req.g = true;
        else { req.gt = true; req.ft_d1 = true; }
        detail::ReducedSweepOut sw = detail::reduced_sweep(wj, p, tj, req);

        const double momj = momentum(wj);
        SpectralState wdot(n, wj.time);
        SpectralState diag_kerr(n, wj.time);
        for (int k = -n; k <= n; ++k) {
            const double kk = static_cast<double>(k);
            diag_kerr.at(k) = cplx(0.0, (p.gamma1 + p.gamma2 * kk) / two_pi) * std::norm(wj.at(k)) * wj.at(k);
            wdot.at(k) = ctx.drift_a * kk * wj.at(k) - (p.Gamma / two_pi) * momj * wj.at(k) -
                         diag_kerr.at(k) + sw.f2.at(k) + sw.f31.at(k) + sw.f32.at(k);
        }

        if (version == DuhamelVersion::PlainDrift) {
            detail::HSweepRequest hreq;
            hreq.h = true;
            hreq.cutoff = cutoff;
            SpectralState hj = detail::h_sweep(wj, wdot, p, tj, hreq).h;
            if (j == 0) g_first = sw.g;
            if (j == nodes - 1) { g_last = sw.g; w_last = wj; }
            for (int k = -n; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double kernel = std::exp(-ctx.drift_a * kk * tj);
                const cplx f1 = -(p.Gamma / two_pi) * momj * wj.at(k) - diag_kerr.at(k);
                const cplx integrand = kernel * (ctx.drift_a * kk * sw.g.at(k) + f1 + sw.f2.at(k) +
                                                 sw.f31.at(k) + hj.at(k));
                acc.at(k) += qw[j] * integrand;
            }
        } else {
            detail::HSweepRequest hreq;
            hreq.ht_split = true;
            hreq.cutoff = cutoff;
            detail::HSweepOut hs = detail::h_sweep(wj, wdot, p, tj, hreq);
            if (j == 0) g_first = sw.gt;
            if (j == nodes - 1) { g_last = sw.gt; w_last = wj; }
            for (int k = -n; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double kernel = std::exp(-(p.Gamma / two_pi) * (l2sq * kk * tj - mom_int[j]));
                const cplx ftilde = sw.ft_d1.at(k) - diag_kerr.at(k);
                const cplx integrand =
                    kernel * ((p.Gamma / two_pi) * (l2sq * kk - mom[j]) * sw.gt.at(k) + ftilde +
                              hs.ht1.at(k) + hs.ht2.at(k));
                acc.at(k) += qw[j] * integrand;
            }
        }
    }

    DuhamelResult res;
    res.trunc = n;
    res.residual.resize(static_cast<std::size_t>(2 * n + 1));
    res.cond_ok.assign(static_cast<std::size_t>(2 * n + 1), 1);
    const SpectralState& u0 = traj.state(0);
    for (int k = -n; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        double kernel_T;
        if (version == DuhamelVersion::PlainDrift) kernel_T = std::exp(-ctx.drift_a * kk * big_t);
        else kernel_T = std::exp(-(p.Gamma / two_pi) * (l2sq * kk * big_t - mom_int[nodes - 1]));
        const cplx rhs = kernel_T * w_last.at(k) - (kernel_T * g_last.at(k) - g_first.at(k)) - acc.at(k);
        res.residual[static_cast<std::size_t>(k + n)] = std::abs(u0.at(k) - rhs);
        if (version == DuhamelVersion::MomentumCorrected)
            res.cond_ok[static_cast<std::size_t>(k + n)] = (2.0 * sup_h12_sq <= l2sq * kk) ? 1 : 0;
    }
    return res;
}

// Early-time exponential rate of mode k in w variables:
//   (Gamma / 2pi) (||u0||^2 k - P[u0]).
inline double predicted_growth_rate(const SpectralState& u0, const ReducedContext& ctx, int k) {
    return (ctx.params.Gamma / two_pi) *
           (ctx.l2_initial * ctx.l2_initial * static_cast<double>(k) - momentum(u0));
}

// ---------------------------------------------------------------------------
// Gauge transformation for the alpha1 = 0 equation: U = exp(lambda d^{-1}|u|^2) u
// removes the worst derivative interactions. lambda = (2 g2 - i G) / (2 i a2).

struct GaugeContext {
    EquationParams params;
    cplx lambda;

    explicit GaugeContext(const EquationParams& p) : params(p) {
        if (p.alpha1 != 0.0 || p.alpha2 == 0.0)
            throw invalid_parameters("GaugeContext: requires alpha1 = 0 and alpha2 != 0");
        lambda = cplx(2.0 * p.gamma2, -p.Gamma) / cplx(0.0, 2.0 * p.alpha2);
    }
};

namespace detail {

inline SpectralState gauge_transform_trunc(const SpectralState& u, const GaugeContext& g,
                                           int out_trunc) {
    const int n = u.trunc;
    SpectralState b = multiply(u, u, 2 * n, /*conj_b=*/true);       // |u|^2
    SpectralState phi_s = g.lambda * antiderivative(b);             // lambda d^{-1}|u|^2

    // exp of a trigonometric polynomial is entire but not band-limited;
    // sample on a grid of at least 8N points and truncate back.
    const std::size_t m = next_pow2(static_cast<std::size_t>(std::max(8 * n, 2 * out_trunc + 2)));
    std::vector<cplx> gphi = to_grid(phi_s, m);
    std::vector<cplx> gu = to_grid(u, m);
    const double inv_root = 1.0 / std::sqrt(two_pi);
    for (std::size_t j = 0; j < m; ++j) gu[j] = std::exp(gphi[j] * inv_root) * gu[j];
    SpectralState out = spectrum_from_grid(std::move(gu), out_trunc, u.time);
    if (!all_finite(out)) throw blow_up_error("gauge_transform: non-finite gauge factor");
    return out;
}

} // namespace detail

inline SpectralState gauge_transform(const SpectralState& u, const GaugeContext& g) {
    return detail::gauge_transform_trunc(u, g, u.trunc);
}

struct GaugeResidualResult {
    std::vector<double> times;
    std::vector<double> residual_l2;      // per interior node
    std::vector<double> truncation_tail;  // l2 mass of gauge output beyond the truncation
    double max_residual = 0.0;
};

namespace detail {

// Copies the overlapping modes into a state of the requested truncation
// (zero-pads when growing, drops the tail when shrinking).
inline SpectralState resize_trunc(const SpectralState& s, int trunc) {
    SpectralState out(trunc, s.time);
    const int m = std::min(s.trunc, trunc);
    for (int k = -m; k <= m; ++k) out.at(k) = s.at(k);
    return out;
}

// Right-hand side of the gauged equation at (u, U):
//   i a2 Uxx + (2 g2 - i G) P0(|u|^2) Ux - g2 u U conj(u)_x + R(u, U).
inline SpectralState gauge_equation_rhs(const SpectralState& u, const SpectralState& bigu,
                                        const GaugeContext& g) {
    const int n = u.trunc;
    const EquationParams& p = g.params;
    const double m0 = l2_norm(u) * l2_norm(u) / two_pi;  // P0(|u|^2)

    SpectralState rhs = cplx(0.0, p.alpha2) * derivative(bigu, 2);
    rhs = rhs + (cplx(2.0 * p.gamma2, -p.Gamma) * m0) * derivative(bigu, 1);

    SpectralState uU = multiply(u, bigu, 2 * n);
    SpectralState dconj = derivative(conjugate_state(u), 1);
    rhs = rhs - cplx(p.gamma2, 0.0) * multiply(uU, dconj, n);

    SpectralState b = multiply(u, u, 2 * n, /*conj_b=*/true);             // |u|^2
    SpectralState bneq = project(b, Projector::NonzeroModes);
    SpectralState q = multiply(b, b, 4 * n);                              // |u|^4
    SpectralState qneq = project(q, Projector::NonzeroModes);
    SpectralState bneq_sq = multiply(bneq, bneq, 4 * n);

    SpectralState bracket = cplx(0.0, p.gamma1) * resize_trunc(b, 4 * n);
    bracket = bracket + (g.lambda * cplx(1.5 * p.gamma2, 0.0)) * qneq;
    bracket = bracket - (g.lambda * cplx(0.0, p.alpha2) * g.lambda) * bneq_sq;
    bracket = bracket - (g.lambda * cplx(0.0, 2.0 * p.alpha2) * g.lambda * m0) * resize_trunc(bneq, 4 * n);
    bracket.at(0) += g.lambda * (p.alpha2 * momentum(u) / (two_pi / 2.0)) * std::sqrt(two_pi);

    rhs = rhs + multiply(bracket, bigu, n);
    return rhs;
}

} // namespace detail

// Checks the gauged equation along a simulated trajectory: centered time
// differences of U against the spectral evaluation of every term.
inline GaugeResidualResult gauge_residual(const Trajectory& traj, const GaugeContext& g) {
    if (traj.size() < 3) throw invalid_parameters("gauge_residual: need at least 3 nodes");
    const int n = traj.state(0).trunc;
    const double h = traj.dt;

    std::vector<SpectralState> gauged;
    gauged.reserve(traj.size());
    std::vector<double> tails(traj.size(), 0.0);
    for (std::size_t j = 0; j < traj.size(); ++j) {
        SpectralState ext = detail::gauge_transform_trunc(traj.state(j), g, 4 * n);
        double tail = 0.0;
        for (int k = -4 * n; k <= 4 * n; ++k)
            if (std::abs(k) > n) tail += std::norm(ext.at(k));
        tails[j] = std::sqrt(tail);
        gauged.push_back(detail::resize_trunc(ext, n));
    }

    GaugeResidualResult res;
    for (std::size_t j = 1; j + 1 < traj.size(); ++j) {
        SpectralState udot = (1.0 / (2.0 * h)) * (gauged[j + 1] - gauged[j - 1]);
        SpectralState rhs = detail::gauge_equation_rhs(traj.state(j), gauged[j], g);
        res.times.push_back(traj.state(j).time);
        res.residual_l2.push_back(l2_norm(udot - rhs));
        res.truncation_tail.push_back(tails[j]);
        res.max_residual = std::max(res.max_residual, res.residual_l2.back());
    }
    return res;
}

} // namespace t3nls
