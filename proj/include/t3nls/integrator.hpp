#pragma once

// Time integration of the truncated Galerkin system: classical RK4 on the
// nonlinear vector field with exact linear propagation between stages
// (integrating-factor formulation; the linear symbol is purely imaginary, so
// the multiplier is unimodular and unconditionally stable).

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "t3nls/errors.hpp"
#include "t3nls/nonlinear.hpp"
#include "t3nls/spectral.hpp"

namespace t3nls {

struct Trajectory {
    std::vector<SpectralState> states;  // uniform grid, states[j].time = t0 + j*dt
    double dt = 0.0;                    // storage spacing, signed
    EquationParams params;

    std::size_t size() const { return states.size(); }
    const SpectralState& state(std::size_t j) const { return states[j]; }
};

struct DiagnosticsRow {
    double t = 0.0;
    double l2 = 0.0;
    double mom = 0.0;
    std::vector<double> hs;        // one entry per configured order
    std::vector<double> mode_abs;  // one entry per probe mode
    double l2_drift_max = 0.0;     // running max of |l2(t)-l2(0)| / l2(0)
};

struct DiagnosticsRecord {
    std::vector<double> hs_orders;
    std::vector<int> probe_modes;
    std::vector<DiagnosticsRow> rows;

    double max_l2_drift() const { return rows.empty() ? 0.0 : rows.back().l2_drift_max; }
};

struct EvolveOptions {
    std::vector<double> hs_orders{1.0};
    std::vector<int> probe_modes{};
    int store_stride = 1;  // record every stride-th step
};

// One RK4 step. dt may be negative for backward runs.
inline SpectralState ifrk4_step(const SpectralState& u, const EquationParams& p, double dt) {
    if (dt == 0.0) throw invalid_parameters("ifrk4_step: dt must be nonzero");
    auto half = [&](const SpectralState& s) { return linear_propagator(s, p, dt / 2.0); };

    SpectralState k1 = rhs_nonlinear(u, p);

    SpectralState s2 = u;
    for (std::size_t i = 0; i < s2.coeffs.size(); ++i) s2.coeffs[i] += (dt / 2.0) * k1.coeffs[i];
    SpectralState k2 = rhs_nonlinear(half(s2), p);

    SpectralState s3 = half(u);
    for (std::size_t i = 0; i < s3.coeffs.size(); ++i) s3.coeffs[i] += (dt / 2.0) * k2.coeffs[i];
    SpectralState k3 = rhs_nonlinear(s3, p);

    SpectralState s4 = linear_propagator(u, p, dt);
    SpectralState ek3 = half(k3);
    for (std::size_t i = 0; i < s4.coeffs.size(); ++i) s4.coeffs[i] += dt * ek3.coeffs[i];
    SpectralState k4 = rhs_nonlinear(s4, p);

    SpectralState out = linear_propagator(u, p, dt);
    SpectralState ek1 = linear_propagator(k1, p, dt);
    SpectralState ek2 = half(k2);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i)
        out.coeffs[i] += (dt / 6.0) * (ek1.coeffs[i] + 2.0 * ek2.coeffs[i] + 2.0 * ek3.coeffs[i] + k4.coeffs[i]);
    out.time = u.time + dt;

    if (!all_finite(out)) throw blow_up_error("ifrk4_step: non-finite coefficient after step");
    return out;
}

// Suggested step for data of this size; no adaptive stepping.
inline double default_dt(const SpectralState& u0) {
    double h1 = hs_norm(u0, 1.0);
    return std::min(1e-3, 0.5 / (1.0 + h1 * h1));
}

namespace detail {

inline DiagnosticsRow diagnostics_row(const SpectralState& s, const EvolveOptions& opts,
                                      double l2_ref, double prev_drift_max) {
    DiagnosticsRow row;
    row.t = s.time;
    row.l2 = l2_norm(s);
    row.mom = momentum(s);
    for (double order : opts.hs_orders) row.hs.push_back(hs_norm(s, order));
    for (int k : opts.probe_modes)
        row.mode_abs.push_back(std::abs(k) <= s.trunc ? std::abs(s.at(k)) : 0.0);
    double drift = l2_ref > 0.0 ? std::abs(row.l2 - l2_ref) / l2_ref : std::abs(row.l2);
    row.l2_drift_max = std::max(prev_drift_max, drift);
    return row;
}

} // namespace detail

// Integrates over [0, T] (or [T, 0] for negative T, consistent with two-sided
// solutions) recording every store_stride-th state.
inline std::pair<Trajectory, DiagnosticsRecord> evolve(const SpectralState& u0,
                                                       const EquationParams& p, double T,
                                                       double dt, const EvolveOptions& opts = {}) {
    if (T == 0.0) throw config_error("evolve: T must be nonzero");
    if (!(dt > 0.0)) throw config_error("evolve: dt must be positive");
    const double span = std::abs(T);
    const long long n = std::llround(span / dt);
    if (n < 1 || std::abs(static_cast<double>(n) * dt - span) > 1e-9 * std::max(1.0, span))
        throw config_error("evolve: dt does not divide T within rounding");
    if (opts.store_stride < 1 || n % opts.store_stride != 0)
        throw config_error("evolve: store_stride must divide the step count");

    const double sdt = T < 0.0 ? -dt : dt;

    Trajectory traj;
    traj.params = p;
    traj.dt = sdt * opts.store_stride;
    traj.states.reserve(static_cast<std::size_t>(n / opts.store_stride) + 1);

    DiagnosticsRecord rec;
    rec.hs_orders = opts.hs_orders;
    rec.probe_modes = opts.probe_modes;

    SpectralState u = u0;
    const double l2_ref = l2_norm(u0);
    traj.states.push_back(u);
    rec.rows.push_back(detail::diagnostics_row(u, opts, l2_ref, 0.0));

    for (long long j = 1; j <= n; ++j) {
        u = ifrk4_step(u, p, sdt);
        u.time = u0.time + static_cast<double>(j) * sdt;  // grid times exact, no accumulation
        if (j % opts.store_stride == 0) {
            traj.states.push_back(u);
            rec.rows.push_back(detail::diagnostics_row(u, opts, l2_ref, rec.rows.back().l2_drift_max));
        }
    }
    return {std::move(traj), std::move(rec)};
}

} // namespace t3nls
