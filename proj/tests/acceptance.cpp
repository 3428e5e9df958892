// Acceptance suite: one criterion per section, one PASS/FAIL line each, all
// tolerances fixed in code. Returns nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "t3nls/analytic.hpp"
#include "t3nls/growth.hpp"
#include "t3nls/initial_data.hpp"
#include "t3nls/integrator.hpp"
#include "t3nls/nonlinear.hpp"
#include "t3nls/rational.hpp"
#include "t3nls/reduction.hpp"

using namespace t3nls;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

SpectralState smooth_random(int n, double amp, double width, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    SpectralState s(n);
    for (int k = -n; k <= n; ++k)
        s.at(k) = amp * std::exp(-(static_cast<double>(k) * k) / (width * width)) *
                  std::polar(1.0, phase(rng));
    return s;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Phase identity in exact rational arithmetic, plus zero-set equivalence.

Outcome criterion_phase_identity() {
    const std::vector<std::pair<Rational, Rational>> sets = {
        {Rational(1), Rational(0)}, {Rational(1), Rational(1)}, {Rational(2), Rational(1, 3)}};
    long compared = 0;
    for (const auto& [a1, a2] : sets) {
        EquationParams p{a1.value(), a2.value(), 0, 0, 1.0};
        const bool zero_set_applies = p.satisfies_nonresonance();
        for (long k1 = -20; k1 <= 20; ++k1)
            for (long k2 = -20; k2 <= 20; ++k2)
                for (long k3 = -20; k3 <= 20; ++k3) {
                    Rational f = phase_phi_factored_rational(a1, a2, k1, k2, k3);
                    Rational e = phase_phi_expanded_rational(a1, a2, k1, k2, k3);
                    if (!(f == e)) return {false, "factored != expanded in rational arithmetic"};
                    if (zero_set_applies) {
                        bool resonant = (k1 + k2) * (k2 + k3) == 0;
                        if (resonant != f.is_zero()) return {false, "zero-set equivalence broken"};
                    }
                    ++compared;
                }
    }
    return {true, std::to_string(compared) + " triples, 3 parameter sets, exact match"};
}

// ---------------------------------------------------------------------------
// 2. Resonant closed form against the constrained brute-force sum.

Outcome criterion_resonant_closed_form() {
    std::mt19937 rng(101);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        SpectralState u = oracles::random_state(16, rng);
        auto [i1, i2] = raman_resonant_split(u);
        worst = std::max(worst, oracles::max_abs_diff(i2, i2_closed_form(u)));
    }
    if (worst > 1e-12) return {false, "closed form vs brute force: " + fmt(worst)};

    SpectralState two(4);
    two.at(1) = cplx(1.0, 0.0);
    two.at(2) = cplx(0.0, 1.0);
    SpectralState closed = i2_closed_form(two);
    double hand = std::abs(closed.at(1) - cplx(1.0 / two_pi, 0.0)) +
                  std::abs(closed.at(2) - cplx(0.0, -1.0 / two_pi));
    if (hand > 1e-15) return {false, "hand example off by " + fmt(hand)};
    return {true, "100 states max dev " + fmt(worst) + ", hand example dev " + fmt(hand)};
}

// ---------------------------------------------------------------------------
// 3. Semi-discrete L2 conservation: algebraic identity and integrated drift.

Outcome criterion_l2_conservation() {
    EquationParams p{1.0, 0.4, 1.0, 1.0, 1.0};
    std::mt19937 rng(202);
    double worst_identity = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        SpectralState u = oracles::random_state(32, rng);
        SpectralState nl = rhs_nonlinear(u, p);
        cplx inner(0.0, 0.0);
        for (int k = -32; k <= 32; ++k) inner += nl.at(k) * std::conj(u.at(k));
        double l2 = l2_norm(u);
        worst_identity = std::max(worst_identity,
                                  std::abs(inner.real()) / std::max(1.0, l2 * l2 * l2 * l2));
    }
    if (worst_identity > 1e-12)
        return {false, "Re<RHS_nl(u),u> identity: " + fmt(worst_identity)};

    SpectralState u0 = smooth_random(64, 0.05, 8.0, 7);
    EvolveOptions opts;
    opts.store_stride = 100;
    auto [traj, rec] = evolve(u0, p, 1.0, 1e-4, opts);
    double drift = rec.max_l2_drift();
    if (drift > 1e-8) return {false, "relative L2 drift " + fmt(drift)};
    return {true, "identity dev " + fmt(worst_identity) + ", T=1 drift " + fmt(drift)};
}

// ---------------------------------------------------------------------------
// 4. Reduced-equation consistency: chain rule and F3_2 = dG/dt + H.

Outcome criterion_reduced_consistency() {
    EquationParams p{1.0, 0.4, 1.0, 1.0, 1.0};
    const double delta = 1e-5;
    double worst_chain = 0.0;
    for (unsigned seed = 11; seed <= 13; ++seed) {
        std::mt19937 rng(seed);
        SpectralState u = cplx(0.5, 0.0) * oracles::random_state(6, rng);
        ReducedContext ctx = ReducedContext::from_data(p, u);
        const double t0 = 0.2;
        SpectralState wp = u_to_w(ifrk4_step(u, p, delta), ctx, t0 + delta);
        SpectralState wm = u_to_w(ifrk4_step(u, p, -delta), ctx, t0 - delta);
        SpectralState fd = cplx(1.0 / (2.0 * delta), 0.0) * (wp - wm);
        RhsWParts parts = rhs_w(u_to_w(u, ctx, t0), ctx, t0);
        worst_chain = std::max(worst_chain, oracles::max_abs_diff(fd, parts.total) /
                                                oracles::max_abs(parts.total));
    }
    if (worst_chain > 1e-6) return {false, "chain-rule FD deviation " + fmt(worst_chain)};

    double worst_split = 0.0;
    for (unsigned seed = 21; seed <= 23; ++seed) {
        std::mt19937 rng(seed);
        SpectralState w = cplx(0.5, 0.0) * oracles::random_state(6, rng);
        ReducedContext ctx = ReducedContext::from_data(p, w);
        const double t0 = 0.3;
        SpectralState wp = oracles::w_rk4_step(w, ctx, t0, delta);
        SpectralState wm = oracles::w_rk4_step(w, ctx, t0, -delta);
        SpectralState dg = cplx(1.0 / (2.0 * delta), 0.0) *
                           (compute_G(wp, ctx, t0 + delta) - compute_G(wm, ctx, t0 - delta));
        RhsWParts parts = rhs_w(w, ctx, t0);
        SpectralState h = compute_H(w, parts.total, ctx, t0);
        worst_split = std::max(worst_split, oracles::max_abs_diff(dg + h, parts.F3_2) /
                                                std::max(1.0, oracles::max_abs(parts.F3_2)));
    }
    if (worst_split > 1e-6) return {false, "F3_2 = dG/dt + H deviation " + fmt(worst_split)};
    return {true, "chain rule " + fmt(worst_chain) + ", integration-by-parts split " + fmt(worst_split)};
}

// ---------------------------------------------------------------------------
// 5. Initial-datum identity: small-data residual and refinement order.

Outcome criterion_duhamel() {
    EquationParams p{1.0, 0.4, 1.0, 1.0, 1.0};
    SpectralState profile = smooth_random(32, 1.0, 4.0, 55);
    SpectralState u0 = cplx(0.1 / hs_norm(profile, 1.0), 0.0) * profile;  // ||u0||_{H1} = 0.1
    ReducedContext ctx = ReducedContext::from_data(p, u0);

    auto residual_with = [&](double dt, int stride) {
        EvolveOptions opts;
        opts.store_stride = stride;
        auto [traj, rec] = evolve(u0, p, 0.1, dt, opts);
        DuhamelResult res = duhamel_residual(traj, ctx, DuhamelVersion::PlainDrift);
        return res.max_residual(1, 16);
    };

    double fine = residual_with(1e-4, 2);    // quadrature step 2e-4
    if (fine > 1e-6) return {false, "max residual over 1<=k<=16: " + fmt(fine)};
    double coarse = residual_with(2e-4, 2);  // both steps doubled
    double order = std::log2(coarse / fine);
    if (order < 3.0)
        return {false,
                "refinement order " + fmt(order) + " (residuals " + fmt(coarse) + " -> " + fmt(fine) + ")"};
    return {true, "residual " + fmt(fine) + ", refinement order " + fmt(order)};
}

// ---------------------------------------------------------------------------
// 6. Analytic solver: contraction, ball membership, stepper agreement at N=64.

Outcome criterion_picard() {
    EquationParams p{1.0, 0.4, 1.0, 1.0, 1.0};
    const int n = 64;
    const double lambda = 0.5;
    SpectralState g = gaussian_data(lambda, n);
    PicardConfig cfg;
    cfg.r = lambda;
    PicardResult res = picard_solve(g, p, cfg);

    for (double ratio : res.contraction_history)
        if (ratio > 0.5) return {false, "contraction ratio " + fmt(ratio)};
    if (res.ball_norm > 2.0 * res.data_ar_norm * (1.0 + 1e-12))
        return {false, "ball membership violated: " + fmt(res.ball_norm)};

    // independent route: integrating-factor stepper over the same interval
    const int m = cfg.grid_points - 1;
    const int sub = 160;
    EvolveOptions opts;
    opts.store_stride = sub;
    auto [fwd, rec_f] = evolve(g, p, res.T_certified, res.T_certified / (m * sub), opts);
    auto [bwd, rec_b] = evolve(g, p, -res.T_certified, res.T_certified / (m * sub), opts);

    double worst = 0.0;
    for (int j = 0; j <= m; ++j) {
        const SpectralState& pic_f = res.trajectory.state(static_cast<std::size_t>(m + j));
        const SpectralState& pic_b = res.trajectory.state(static_cast<std::size_t>(m - j));
        double df = 0.0, db = 0.0;
        for (int k = -n; k <= n; ++k) {
            double w = std::exp(0.5 * lambda * std::abs(k));
            df += w * std::abs(pic_f.at(k) - fwd.state(static_cast<std::size_t>(j)).at(k));
            db += w * std::abs(pic_b.at(k) - bwd.state(static_cast<std::size_t>(j)).at(k));
        }
        worst = std::max({worst, df, db});
    }
    if (worst > 1e-6) return {false, "stepper disagreement in A(r/2): " + fmt(worst)};
    double max_ratio = res.contraction_history.empty()
                           ? 0.0
                           : *std::max_element(res.contraction_history.begin(),
                                               res.contraction_history.end());
    return {true, "T=" + fmt(res.T_certified) + ", " + std::to_string(res.iterations) +
                      " iterations, max ratio " + fmt(max_ratio) + ", stepper distance " + fmt(worst)};
}

// ---------------------------------------------------------------------------
// 7. Existence-time scaling across the Gaussian family.

Outcome criterion_tlambda_scaling() {
    EquationParams p{1.0, 0.4, 1.0, 1.0, 1.0};
    PicardConfig cfg;
    cfg.grid_points = 33;
    std::vector<TlambdaRow> rows = tlambda_scan({0.1, 0.2, 0.4, 0.8}, p, cfg);

    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].t_certified < rows[i - 1].t_certified)
            return {false, "T_certified not nondecreasing"};

    double sxy = 0.0, sxx = 0.0, mean = 0.0;
    for (const auto& r : rows) {
        sxy += r.lambda * r.t_certified;
        sxx += r.lambda * r.lambda;
        mean += r.t_certified / static_cast<double>(rows.size());
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& r : rows) {
        ss_res += (r.t_certified - slope * r.lambda) * (r.t_certified - slope * r.lambda);
        ss_tot += (r.t_certified - mean) * (r.t_certified - mean);
    }
    const double r2 = 1.0 - ss_res / ss_tot;
    if (r2 < 0.99) return {false, "origin-forced fit R^2 = " + fmt(r2)};
    return {true, "T in [" + fmt(rows.front().t_certified) + ", " + fmt(rows.back().t_certified) +
                      "], R^2 = " + fmt(r2)};
}

// ---------------------------------------------------------------------------
// 8. Growth-rate experiment against the momentum-corrected drift prediction.

Outcome criterion_growth() {
    GrowthOptions opts;
    opts.params = EquationParams{1.0, 0.4, 1.0, 1.0, 100.0 * two_pi};
    opts.n = 64;
    opts.big_t = 2.0;
    opts.dt = 1e-4;
    opts.delta = 0.05;
    opts.probes = {8};
    opts.store_stride = 10;
    auto rows = growth_experiment(opts);
    const GrowthRow& row = rows.front();
    if (!row.window_ok) return {false, "no fit window met the residual bound"};
    if (!(row.rel_gap <= 0.1))
        return {false, "fitted " + fmt(row.fitted_rate) + " vs predicted " + fmt(row.predicted_rate) +
                           " (gap " + fmt(row.rel_gap) + ")"};

    GrowthOptions off = opts;
    off.params.Gamma = 0.0;
    auto quiet = growth_experiment(off);
    const double noise_bound = 0.02 * row.predicted_rate;
    if (std::abs(quiet.front().fitted_rate) > noise_bound)
        return {false, "Gamma=0 fitted rate " + fmt(quiet.front().fitted_rate) + " above noise bound"};
    return {true, "gap " + fmt(row.rel_gap) + " (window to t=" + fmt(row.window_t1) +
                      "), Gamma=0 rate " + fmt(quiet.front().fitted_rate)};
}

// ---------------------------------------------------------------------------
// 9. Gauge module for the alpha1 = 0 equation.

Outcome criterion_gauge() {
    std::mt19937 rng(71);
    SpectralState u = oracles::random_state(16, rng);
    SpectralState lhs = derivative(antiderivative(u), 1);
    SpectralState rhs = project(u, Projector::NonzeroModes);
    if (lhs.at(0) != cplx(0.0, 0.0)) return {false, "mode 0 not annihilated exactly"};
    for (int k = -16; k <= 16; ++k) {
        if (k == 0) continue;
        if (std::abs(lhs.at(k) - rhs.at(k)) > 1e-15 * std::abs(rhs.at(k)))
            return {false, "dx d^{-1} differs from P_neq0 at k=" + std::to_string(k)};
    }

    EquationParams p{0.0, 1.0, 1.0, 1.0, 1.0};
    GaugeContext g(p);
    SpectralState u0 = smooth_random(32, 0.05, 4.0, 99);
    auto run = [&](int stride) {
        EvolveOptions opts;
        opts.store_stride = stride;
        auto [traj, rec] = evolve(u0, p, 0.05, 1e-4, opts);
        return gauge_residual(traj, g).max_residual;
    };
    double fine = run(5);     // centered differences with step 5e-4
    double coarse = run(10);  // step 1e-3
    if (fine > 1e-4) return {false, "gauge residual " + fmt(fine)};
    if (!(coarse > 2.5 * fine))
        return {false, "residual not decreasing under refinement (" + fmt(coarse) + " vs " + fmt(fine) + ")"};
    return {true, "residual " + fmt(fine) + ", refinement ratio " + fmt(coarse / fine)};
}

// ---------------------------------------------------------------------------
// 10. Data generators.

Outcome criterion_generators() {
    if (sigma_exponent(1.0) != 1.0 / 6.0) return {false, "sigma(1) != 1/6"};
    if (sigma_exponent(2.0) != 1.0 / 3.0) return {false, "sigma(2) != 1/3"};

    const double eps = 0.37;
    SpectralState phi = perturbation_phi(1.5, eps, 9, 16);
    double dev = std::abs(hs_norm(phi, 1.5) - eps) / eps;
    if (dev > 1e-12) return {false, "||phi||_{H^s} off by " + fmt(dev)};

    SpectralState lac = lacunary_data(2.0, 16);
    double lac_dev = std::abs(lac.at(2).real() - 1.0 / 9.0);
    if (lac_dev > 1e-15 || lac.at(2).imag() != 0.0) return {false, "lacunary mode 2 off"};
    return {true, "sigma values exact, ||phi|| dev " + fmt(dev) + ", lacunary dev " + fmt(lac_dev)};
}

} // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<Outcome()> run;
        double time_limit;  // seconds; 0 = no stated limit
    };
    const std::vector<Entry> criteria = {
        {"phase identity (exact rational, zero set)", criterion_phase_identity, 10.0},
        {"resonant closed form", criterion_resonant_closed_form, 10.0},
        {"semi-discrete L2 conservation", criterion_l2_conservation, 120.0},
        {"reduced-equation consistency", criterion_reduced_consistency, 0.0},
        {"initial-datum identity residual", criterion_duhamel, 0.0},
        {"analytic solver certification", criterion_picard, 300.0},
        {"existence-time scaling", criterion_tlambda_scaling, 0.0},
        {"growth-rate experiment", criterion_growth, 0.0},
        {"gauge module (alpha1 = 0)", criterion_gauge, 0.0},
        {"data generators", criterion_generators, 0.0},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out.pass && criteria[i].time_limit > 0.0 && secs > criteria[i].time_limit)
            out = {false, out.detail + "; runtime " + fmt(secs) + "s exceeds " +
                              fmt(criteria[i].time_limit) + "s"};
        std::printf("%s  criterion %2zu: %s  [%s] (%.1fs)\n", out.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, out.detail.c_str(), secs);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
