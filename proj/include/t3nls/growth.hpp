#pragma once

// Growth-rate experiment: evolve small lacunary data, move to w variables,
// fit log|what(t,k)| on an early-time window, and compare against the
// momentum-corrected drift prediction.

#include <cmath>
#include <limits>
#include <vector>

#include "t3nls/initial_data.hpp"
#include "t3nls/integrator.hpp"
#include "t3nls/reduction.hpp"

namespace t3nls {

struct GrowthOptions {
    EquationParams params;
    int n = 64;
    double big_t = 2.0;
    double dt = 1e-4;
    double s0 = 2.0;       // lacunary decay exponent
    double delta = 0.05;   // data amplitude
    std::vector<int> probes{8};
    double fit_residual_bound = 0.05;
    int store_stride = 10;
    std::size_t min_window_nodes = 8;
};

struct GrowthRow {
    int k = 0;
    double fitted_rate = 0.0;
    double predicted_rate = 0.0;
    double rel_gap = 0.0;       // |fitted - predicted| / |predicted| (NaN when predicted = 0)
    double window_t0 = 0.0;
    double window_t1 = 0.0;
    bool window_ok = false;
    double fit_residual = 0.0;  // relative rms residual of the accepted fit
};

namespace detail {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rel_residual = 0.0;
};

inline LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y, std::size_t count) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < count; ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double nn = static_cast<double>(count);
    const double det = nn * stt - st * st;
    LineFit f;
    f.slope = (nn * sty - st * sy) / det;
    f.intercept = (sy * stt - st * sty) / det;
    double ss = 0;
    for (std::size_t i = 0; i < count; ++i) {
        double r = y[i] - f.intercept - f.slope * t[i];
        ss += r * r;
    }
    const double rms = std::sqrt(ss / nn);
    const double range = std::abs(f.slope * (t[count - 1] - t[0]));
    f.rel_residual = rms / std::max(range, 1e-300);
    return f;
}

} // namespace detail

inline std::vector<GrowthRow> growth_experiment(const GrowthOptions& opts) {
    SpectralState u0 = cplx(opts.delta, 0.0) * lacunary_data(opts.s0, opts.n);
    for (int k : opts.probes) {
        if (k <= 0 || k > opts.n) throw config_error("growth_experiment: probe outside truncation");
        if (u0.at(k) == cplx(0.0, 0.0))
            u0.at(k) = opts.delta * std::pow(1.0 + static_cast<double>(k), -opts.s0);
    }

    ReducedContext ctx = ReducedContext::from_data(opts.params, u0);

    // cubic terms must stay subdominant to the linear drift on the probes
    if (opts.params.Gamma > 0.0) {
        for (int k : opts.probes) {
            double rate = predicted_growth_rate(u0, ctx, k);
            if (opts.delta * opts.delta * opts.n > rate)
                throw config_error("growth_experiment: amplitude too large for the drift regime "
                                   "(delta^2 N exceeds the predicted rate)");
        }
    }

    EvolveOptions eopts;
    eopts.store_stride = opts.store_stride;
    eopts.probe_modes = opts.probes;
    auto [traj, rec] = evolve(u0, opts.params, opts.big_t, opts.dt, eopts);

    std::vector<double> times;
    times.reserve(traj.size());
    for (std::size_t j = 0; j < traj.size(); ++j) times.push_back(traj.state(j).time);

    std::vector<GrowthRow> rows;
    for (int k : opts.probes) {
        std::vector<double> logs;
        logs.reserve(traj.size());
        for (std::size_t j = 0; j < traj.size(); ++j) {
            SpectralState w = u_to_w(traj.state(j), ctx, traj.state(j).time);
            logs.push_back(std::log(std::abs(w.at(k))));
        }

        GrowthRow row;
        row.k = k;
        row.predicted_rate = predicted_growth_rate(u0, ctx, k);
        row.window_t0 = times.front();

        // largest early-time window whose linear fit meets the residual bound
        detail::LineFit best;
        std::size_t best_count = 0;
        for (std::size_t count = traj.size(); count >= opts.min_window_nodes; --count) {
            detail::LineFit f = detail::fit_line(times, logs, count);
            if (f.rel_residual <= opts.fit_residual_bound) {
                best = f;
                best_count = count;
                break;
            }
        }
        if (best_count == 0) {
            row.window_ok = false;
            best = detail::fit_line(times, logs, traj.size());
            best_count = traj.size();
        } else {
            row.window_ok = true;
        }
        row.fitted_rate = best.slope;
        row.fit_residual = best.rel_residual;
        row.window_t1 = times[best_count - 1];
        row.rel_gap = row.predicted_rate != 0.0
                          ? std::abs(row.fitted_rate - row.predicted_rate) / std::abs(row.predicted_rate)
                          : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
    }
    return rows;
}

} // namespace t3nls
