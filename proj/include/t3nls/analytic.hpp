#pragma once

// Fixed-point solver in the analytic class: the integral-equation map
//   Psi[u0](u)(t) = U(t) u0 + int_0^t U(t-t') [i g1 |u|^2 u + g2 (|u|^2 u)_x
//                                              - i G u (|u|^2)_x](t') dt',
// iterated on a symmetric time grid inside the ball
//   ||| u |||_{r,T} = || sup_{|t|<=T} e^{r(1-|t|/(2T))|k|} |uhat(t,k)| ||_{l1} <= 2 ||u0||_{A(r)},
// with a-posteriori contraction certification and the existence-time rule
// T = c min{1, r} ||u0||_{A(r)}^{-2}.

#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

#include "t3nls/integrator.hpp"
#include "t3nls/nonlinear.hpp"
#include "t3nls/quadrature.hpp"
#include "t3nls/spectral.hpp"

namespace t3nls {

struct PicardConfig {
    double r = 0.5;        // initial analyticity radius
    double c = 1.0 / 64.0; // existence-time constant (halved adaptively on failure)
    int grid_points = 65;  // time-quadrature nodes per side, odd
    double tol = 1e-12;    // fixed-point stopping tolerance
    int max_iter = 100;
    bool auto_truncate = true;  // drop data modes whose ball weight sits below rounding

    void validate() const {
        if (!(r > 0.0)) throw invalid_parameters("PicardConfig: r must be positive");
        if (!(c > 0.0) || c > 1.0) throw invalid_parameters("PicardConfig: need 0 < c <= 1");
        if (grid_points < 3 || grid_points % 2 == 0)
            throw invalid_parameters("PicardConfig: grid_points must be odd and >= 3");
        if (!(tol > 0.0) || max_iter < 1) throw invalid_parameters("PicardConfig: bad tol/max_iter");
    }
};

struct PicardResult {
    double T_certified = 0.0;
    int trunc_used = 0;  // working truncation after the weighted-tail rule
    Trajectory trajectory;                    // symmetric grid on [-T, T]
    std::vector<double> contraction_history;  // ||u_{n+1}-u_n|| / ||u_n-u_{n-1}|| in |||.|||
    double ball_norm = 0.0;                   // |||u|||_{r,T} of the solution
    double data_ar_norm = 0.0;                // ||u0||_{A(r)}
    double residual = 0.0;                    // final fixed-point increment in |||.|||
    double c_used = 0.0;
    int halvings = 0;
    int iterations = 0;
};

inline double existence_time(double r, double a_norm, double c) {
    if (a_norm == 0.0) return 1.0;  // zero data: any horizon works; pick 1
    return c * std::min(1.0, r) / (a_norm * a_norm);
}

// sup over the stored grid times of the shrinking-radius weighted coefficients,
// summed over modes. The sup over continuous t is approached by grid refinement.
inline double triple_norm(const Trajectory& traj, double r, double big_t) {
    if (traj.size() == 0) return 0.0;
    const int n = traj.state(0).trunc;
    if (r * n > 300.0) throw weight_overflow("triple_norm: r*N exceeds 300");
    double total = 0.0;
    for (int k = -n; k <= n; ++k) {
        double sup = 0.0;
        for (std::size_t j = 0; j < traj.size(); ++j) {
            const double t = std::abs(traj.state(j).time);
            const double w = std::exp(r * (1.0 - t / (2.0 * big_t)) * std::abs(static_cast<double>(k)));
            sup = std::max(sup, w * std::abs(traj.state(j).at(k)));
        }
        total += sup;
    }
    return total;
}

namespace detail {

// U(d*h) applied mode-wise, with the phases tabulated per time offset.
struct PropagatorTable {
    int trunc = 0;
    std::vector<std::vector<cplx>> fwd;  // fwd[d][slot] = e^{-i(a1 k^3 + a2 k^2) d h}

    PropagatorTable(const EquationParams& p, double h, int max_offset, int n) : trunc(n) {
        fwd.resize(static_cast<std::size_t>(max_offset) + 1);
        for (int d = 0; d <= max_offset; ++d) {
            fwd[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(2 * n + 1));
            for (int k = -n; k <= n; ++k) {
                double kk = static_cast<double>(k);
                double phase = -(p.alpha1 * kk * kk * kk + p.alpha2 * kk * kk) * (d * h);
                fwd[static_cast<std::size_t>(d)][static_cast<std::size_t>(k + n)] = std::polar(1.0, phase);
            }
        }
    }

    cplx factor(int offset, int k) const {
        if (offset >= 0) return fwd[static_cast<std::size_t>(offset)][static_cast<std::size_t>(k + trunc)];
        return std::conj(fwd[static_cast<std::size_t>(-offset)][static_cast<std::size_t>(k + trunc)]);
    }
};

inline Trajectory free_trajectory(const SpectralState& u0, const EquationParams& p, double big_t,
                                  int per_side) {
    const int m = per_side - 1;
    const double h = big_t / m;
    Trajectory traj;
    traj.params = p;
    traj.dt = h;
    traj.states.reserve(static_cast<std::size_t>(2 * m) + 1);
    for (int j = -m; j <= m; ++j) {
        SpectralState s = linear_propagator(u0, p, j * h);
        s.time = j * h;
        traj.states.push_back(std::move(s));
    }
    return traj;
}

inline SpectralState pad_trunc(const SpectralState& s, int trunc) {
    SpectralState out(trunc, s.time);
    const int m = std::min(s.trunc, trunc);
    for (int k = -m; k <= m; ++k) out.at(k) = s.at(k);
    return out;
}

inline double triple_norm_diff(const Trajectory& a, const Trajectory& b, double r, double big_t) {
    const int n = a.state(0).trunc;
    double total = 0.0;
    for (int k = -n; k <= n; ++k) {
        double sup = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double t = std::abs(a.state(j).time);
            const double w = std::exp(r * (1.0 - t / (2.0 * big_t)) * std::abs(static_cast<double>(k)));
            sup = std::max(sup, w * std::abs(a.state(j).at(k) - b.state(j).at(k)));
        }
        total += sup;
    }
    return total;
}

} // namespace detail

// One application of the integral-equation map on the trajectory's grid.
// Sub-interval integrals use composite Simpson from the center node outwards.
inline Trajectory psi_map(const SpectralState& u0, const Trajectory& traj, const EquationParams& p,
                          double r, double big_t) {
    const std::size_t nodes = traj.size();
    // >= 5 so the one-sided rule for the innermost sub-interval has its
    // support node on the grid
    if (nodes < 5 || nodes % 2 == 0)
        throw invalid_parameters("psi_map: trajectory must hold an odd number of nodes >= 5");
    const int n = u0.trunc;
    require_same_trunc(u0, traj.state(0));
    if (r * n > 300.0) throw weight_overflow("psi_map: r*N exceeds 300");
    if (std::abs(traj.states.back().time - big_t) > 1e-9 * std::max(1.0, big_t))
        throw invalid_parameters("psi_map: trajectory grid does not span [-T, T]");

    const int m = static_cast<int>(nodes / 2);  // center index, t = 0
    const double h = traj.dt;

    std::vector<SpectralState> nl;
    nl.reserve(nodes);
    for (std::size_t l = 0; l < nodes; ++l) nl.push_back(rhs_nonlinear(traj.state(l), p));

    detail::PropagatorTable prop(p, h, 2 * m, n);

    Trajectory out;
    out.params = p;
    out.dt = h;
    out.states.reserve(nodes);
    for (int j = 0; j < static_cast<int>(nodes); ++j) {
        const double tj = (j - m) * h;
        SpectralState s = linear_propagator(u0, p, tj);
        s.time = tj;

        const int span = std::abs(j - m);
        if (span > 0) {
            const int dir = j > m ? 1 : -1;
            std::vector<double> w;
            int used = span;
            if (span == 1) {
                // one-sided quadratic through the next grid node keeps the
                // first sub-interval at the same order as the Simpson panels
                w = {5.0 * dir * h / 12.0, 8.0 * dir * h / 12.0, -dir * h / 12.0};
                used = 2;
            } else {
                w = composite_simpson_weights(static_cast<std::size_t>(span) + 1, dir * h);
            }
            for (int i = 0; i <= used; ++i) {
                const int l = m + dir * i;
                const int offset = j - l;
                const SpectralState& f = nl[static_cast<std::size_t>(l)];
                for (int k = -n; k <= n; ++k)
                    s.at(k) += w[static_cast<std::size_t>(i)] * prop.factor(offset, k) * f.at(k);
            }
        }
        if (!all_finite(s)) throw blow_up_error("psi_map: non-finite coefficient");
        out.states.push_back(std::move(s));
    }
    return out;
}

// Smallest truncation whose weighted data tail is below rounding: beyond it
// the e^{r|k|} ball weight would only amplify floating-point noise.
inline int picard_work_trunc(const SpectralState& u0, double r, double ar) {
    const int n = u0.trunc;
    if (ar <= 0.0) return std::min(n, 1);
    std::vector<double> tail(static_cast<std::size_t>(n) + 1, 0.0);
    for (int m = n; m >= 1; --m) {
        double here = std::exp(0.5 * r * m) * std::max(std::abs(u0.at(m)), std::abs(u0.at(-m)));
        tail[static_cast<std::size_t>(m)] = std::max(here, m < n ? tail[static_cast<std::size_t>(m) + 1] : 0.0);
    }
    for (int m = 1; m <= n; ++m)
        if (tail[static_cast<std::size_t>(m)] <= 1e-16 * ar) return m;
    return n;
}

inline PicardResult picard_solve(const SpectralState& u0_in, const EquationParams& p,
                                 const PicardConfig& cfg) {
    cfg.validate();
    const double ar = ar_norm(u0_in, cfg.r);
    const int work = cfg.auto_truncate ? picard_work_trunc(u0_in, cfg.r, ar) : u0_in.trunc;
    SpectralState u0(work, u0_in.time);
    for (int k = -work; k <= work; ++k) u0.at(k) = u0_in.at(k);

    double c_cur = cfg.c;
    for (int attempt = 0; attempt <= 8; ++attempt, c_cur /= 2.0) {
        const double big_t = existence_time(cfg.r, ar, c_cur);
        Trajectory iter = detail::free_trajectory(u0, p, big_t, cfg.grid_points);

        std::vector<double> history;
        double prev_diff = -1.0;
        bool failed = false;

        for (int it = 1; it <= cfg.max_iter; ++it) {
            Trajectory next = psi_map(u0, iter, p, cfg.r, big_t);
            const double ball = triple_norm(next, cfg.r, big_t);
            if (ball > 2.0 * ar * (1.0 + 1e-12) && ar > 0.0) { failed = true; break; }

            const double diff = detail::triple_norm_diff(next, iter, cfg.r, big_t);
            const double scale = std::max(1.0, ball);
            if (diff <= cfg.tol * scale) {
                PicardResult res;
                res.T_certified = big_t;
                res.trunc_used = work;
                if (work != u0_in.trunc)
                    for (SpectralState& s : next.states) s = detail::pad_trunc(s, u0_in.trunc);
                res.trajectory = std::move(next);
                res.contraction_history = std::move(history);
                res.ball_norm = ball;
                res.data_ar_norm = ar;
                res.residual = diff;
                res.c_used = c_cur;
                res.halvings = attempt;
                res.iterations = it;
                return res;
            }
            if (prev_diff > 10.0 * cfg.tol * scale) {
                const double ratio = diff / prev_diff;
                history.push_back(ratio);
                if (ratio > 0.5) { failed = true; break; }
            }
            prev_diff = diff;
            iter = std::move(next);
        }
        (void)failed;  // max_iter exhausted counts as a failed horizon too
    }
    throw no_contraction_error("picard_solve: no contraction after 8 horizon halvings");
}

// ---------------------------------------------------------------------------
// Gaussian-data study. ghat_lambda(k) = lambda e^{-lambda^2 k^2}; with the
// radius choice r = lambda the data norm stays O(1) and the certified horizon
// scales linearly in lambda.

inline SpectralState gaussian_data(double lambda, int n) {
    if (!(lambda > 0.0)) throw invalid_parameters("gaussian_data: lambda must be positive");
    SpectralState out(n);
    for (int k = -n; k <= n; ++k) {
        double kk = static_cast<double>(k);
        out.at(k) = lambda * std::exp(-lambda * lambda * kk * kk);
    }
    return out;
}

// Smallest truncation whose weighted tail sits below rounding, capped by the
// weight guard r*N <= 300.
inline int gaussian_trunc_for(double lambda, double r) {
    if (!(lambda > 0.0) || !(r > 0.0)) throw invalid_parameters("gaussian_trunc_for: bad arguments");
    double norm = 0.0;
    for (int k = 0; k < 100000; ++k) {
        double term = lambda * std::exp(r * k - lambda * lambda * static_cast<double>(k) * k);
        norm += (k == 0 ? term : 2.0 * term);
        if (k > 2 && term < 1e-300) break;
    }
    const int cap = static_cast<int>(300.0 / r);
    for (int n = 2; n <= cap; ++n) {
        double tail = std::exp(0.5 * r * n) * lambda * std::exp(-lambda * lambda * static_cast<double>(n) * n);
        if (tail <= 1e-16 * norm) return n;
    }
    return cap;
}

struct TlambdaRow {
    double lambda = 0.0;
    double ar = 0.0;           // ||g_lambda||_{A(lambda)}
    double t_certified = 0.0;
    int trunc = 0;
    double c_used = 0.0;
    double dispersion_length = 0.0;  // lambda^2 / |alpha2| when alpha2 != 0
};

inline std::vector<TlambdaRow> tlambda_scan(const std::vector<double>& lambdas,
                                            const EquationParams& p, const PicardConfig& base) {
    std::vector<TlambdaRow> rows;
    for (double lambda : lambdas) {
        PicardConfig cfg = base;
        cfg.r = lambda;
        const int n = gaussian_trunc_for(lambda, lambda);
        SpectralState g = gaussian_data(lambda, n);
        PicardResult res = picard_solve(g, p, cfg);
        TlambdaRow row;
        row.lambda = lambda;
        row.ar = res.data_ar_norm;
        row.t_certified = res.T_certified;
        row.trunc = n;
        row.c_used = res.c_used;
        row.dispersion_length = p.alpha2 != 0.0 ? lambda * lambda / std::abs(p.alpha2) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace t3nls
