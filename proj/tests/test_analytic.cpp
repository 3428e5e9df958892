#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "t3nls/analytic.hpp"
#include "t3nls/integrator.hpp"

using namespace t3nls;

namespace {
const EquationParams kParams{1.0, 0.4, 1.0, 1.0, 1.0};
}

TEST_CASE("existence time rule") {
    CHECK(existence_time(0.5, 0.0, 1.0 / 64.0) == 1.0);                       // zero-data guard
    CHECK(existence_time(2.0, 1.0, 1.0 / 64.0) == doctest::Approx(1.0 / 64.0));
    CHECK(existence_time(0.5, 3.0, 1.0 / 64.0) == doctest::Approx(1.0 / 1152.0));
}

TEST_CASE("gaussian data") {
    CHECK_THROWS_AS(gaussian_data(0.0, 8), invalid_parameters);
    SpectralState g = gaussian_data(0.5, 16);
    CHECK(g.at(0) == cplx(0.5, 0.0));
    CHECK(std::abs(g.at(2) - cplx(0.5 * std::exp(-1.0), 0.0)) < 1e-16);
    CHECK(g.at(-2) == g.at(2));
}

TEST_CASE("gaussian truncation rule") {
    int n = gaussian_trunc_for(0.5, 0.5);
    CHECK(n * 0.5 <= 300.0);
    double norm = ar_norm(gaussian_data(0.5, n), 0.5);
    double tail = std::exp(0.25 * n) * 0.5 * std::exp(-0.25 * n * n);
    CHECK(tail <= 1e-16 * norm);
    // lambda = 0.1 needs a much wider spectrum
    CHECK(gaussian_trunc_for(0.1, 0.1) > 2 * n);
}

TEST_CASE("triple norm") {
    Trajectory empty_traj;
    empty_traj.dt = 0.1;
    SpectralState z(6);
    for (int j = -2; j <= 2; ++j) {
        SpectralState s = z;
        s.time = 0.1 * j;
        empty_traj.states.push_back(s);
    }
    CHECK(triple_norm(empty_traj, 0.5, 0.2) == 0.0);

    // constant-in-time trajectory: the sup sits at t = 0 and equals the data norm
    std::mt19937 rng(3);
    SpectralState u = oracles::random_state(6, rng);
    Trajectory const_traj;
    const_traj.dt = 0.1;
    for (int j = -2; j <= 2; ++j) {
        SpectralState s = u;
        s.time = 0.1 * j;
        const_traj.states.push_back(s);
    }
    CHECK(triple_norm(const_traj, 0.5, 0.2) == doctest::Approx(ar_norm(u, 0.5)).epsilon(1e-14));

    // free evolution: unimodular propagator, the norm is exactly the data norm
    Trajectory free = t3nls::detail::free_trajectory(u, kParams, 0.2, 3);
    CHECK(std::abs(triple_norm(free, 0.5, 0.2) - ar_norm(u, 0.5)) <= 1e-12 * ar_norm(u, 0.5));

    SpectralState wide(700);
    Trajectory wide_traj;
    wide_traj.dt = 0.1;
    wide_traj.states.push_back(wide);
    wide_traj.states.push_back(wide);
    wide_traj.states.push_back(wide);
    CHECK_THROWS_AS(triple_norm(wide_traj, 0.5, 0.1), weight_overflow);
}

TEST_CASE("psi map: trivial cases") {
    SpectralState z(8);
    Trajectory ztraj = t3nls::detail::free_trajectory(z, kParams, 0.1, 5);
    Trajectory out = psi_map(z, ztraj, kParams, 0.5, 0.1);
    for (std::size_t j = 0; j < out.size(); ++j) CHECK(oracles::max_abs(out.state(j)) == 0.0);

    // zero trajectory but nonzero datum: the map returns the free evolution
    std::mt19937 rng(5);
    SpectralState u0 = oracles::random_state(8, rng);
    Trajectory zero_traj = ztraj;
    Trajectory free_out = psi_map(u0, zero_traj, kParams, 0.5, 0.1);
    Trajectory free_ref = t3nls::detail::free_trajectory(u0, kParams, 0.1, 5);
    for (std::size_t j = 0; j < free_out.size(); ++j)
        CHECK(oracles::max_abs_diff(free_out.state(j), free_ref.state(j)) < 1e-14);
}

TEST_CASE("psi map: plane-wave fixed point") {
    // u = e^{i g1 t} solves the equation with gamma1 only
    EquationParams p{0, 0, 1.0, 0, 0};
    const double big_t = 0.05;
    const int per_side = 17;
    SpectralState u0(6);
    u0.at(0) = std::sqrt(two_pi);

    Trajectory exact;
    exact.params = p;
    exact.dt = big_t / (per_side - 1);
    for (int j = -(per_side - 1); j <= per_side - 1; ++j) {
        SpectralState s(6, j * exact.dt);
        s.at(0) = std::sqrt(two_pi) * std::polar(1.0, j * exact.dt);
        exact.states.push_back(s);
    }
    Trajectory mapped = psi_map(u0, exact, p, 0.5, big_t);
    double worst = 0.0;
    for (std::size_t j = 0; j < mapped.size(); ++j)
        worst = std::max(worst, oracles::max_abs_diff(mapped.state(j), exact.state(j)));
    CHECK(worst < 1e-10);
}

TEST_CASE("picard: zero data") {
    PicardConfig cfg;
    cfg.r = 0.5;
    SpectralState z(8);
    PicardResult res = picard_solve(z, kParams, cfg);
    CHECK(res.T_certified == 1.0);
    CHECK(res.ball_norm == 0.0);
    for (std::size_t j = 0; j < res.trajectory.size(); ++j)
        CHECK(oracles::max_abs(res.trajectory.state(j)) == 0.0);
}

TEST_CASE("picard: config validation and weight guard") {
    SpectralState g = gaussian_data(0.5, 16);
    PicardConfig bad;
    bad.grid_points = 16;
    CHECK_THROWS_AS(picard_solve(g, kParams, bad), invalid_parameters);
    PicardConfig negr;
    negr.r = -1.0;
    CHECK_THROWS_AS(picard_solve(g, kParams, negr), invalid_parameters);
    PicardConfig guard;
    guard.r = 30.0;  // r*N > 300
    CHECK_THROWS_AS(picard_solve(g, kParams, guard), weight_overflow);
}

TEST_CASE("picard: gaussian datum certifies and solves the system") {
    PicardConfig cfg;
    cfg.r = 0.5;
    cfg.grid_points = 33;
    const int n = gaussian_trunc_for(0.5, 0.5);
    SpectralState g = gaussian_data(0.5, n);
    PicardResult res = picard_solve(g, kParams, cfg);

    CHECK(res.T_certified > 0.0);
    CHECK(res.ball_norm <= 2.0 * res.data_ar_norm * (1.0 + 1e-12));
    for (double ratio : res.contraction_history) CHECK(ratio <= 0.5);
    CHECK(res.residual <= cfg.tol * std::max(1.0, res.ball_norm));

    // the fixed point solves the coefficient system: centered differences in t
    // match the right-hand side on interior nodes
    const double h = res.trajectory.dt;
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < res.trajectory.size(); ++j) {
        SpectralState fd = cplx(1.0 / (2.0 * h), 0.0) *
                           (res.trajectory.state(j + 1) - res.trajectory.state(j - 1));
        SpectralState rhs = rhs_full(res.trajectory.state(j), kParams);
        worst = std::max(worst, oracles::max_abs_diff(fd, rhs));
    }
    // FD error ~ h^2 |u'''|; the linear phases dominate with |mu| <= a1 N^3
    CHECK(worst < 1e-3);

    // every iterate lives in the shrinking-radius family: per-time weighted sums
    // stay below the ball norm
    for (std::size_t j = 0; j < res.trajectory.size(); ++j) {
        const SpectralState& s = res.trajectory.state(j);
        double t = std::abs(s.time);
        double sum = 0.0;
        for (int k = -s.trunc; k <= s.trunc; ++k)
            sum += std::exp(cfg.r * (1.0 - t / (2.0 * res.T_certified)) * std::abs(k)) * std::abs(s.at(k));
        CHECK(sum <= res.ball_norm * (1.0 + 1e-12));
    }
}

TEST_CASE("picard: quadrature refinement settles at fourth order") {
    const int n = gaussian_trunc_for(0.5, 0.5);
    SpectralState g = gaussian_data(0.5, n);
    auto solve_with = [&](int gp) {
        PicardConfig cfg;
        cfg.r = 0.5;
        cfg.grid_points = gp;
        return picard_solve(g, kParams, cfg);
    };
    PicardResult a = solve_with(9);
    PicardResult b = solve_with(17);
    PicardResult c = solve_with(33);
    REQUIRE(a.T_certified == b.T_certified);
    REQUIRE(b.T_certified == c.T_certified);

    // compare at shared times (every node of the coarse grid)
    auto diff_on_coarse = [&](const PicardResult& fine, const PicardResult& coarse, int stride) {
        double worst = 0.0;
        for (std::size_t j = 0; j < coarse.trajectory.size(); ++j)
            worst = std::max(worst, oracles::max_abs_diff(coarse.trajectory.state(j),
                                                          fine.trajectory.state(stride * j)));
        return worst;
    };
    double d1 = diff_on_coarse(b, a, 2);
    double d2 = diff_on_coarse(c, b, 2);
    CHECK(d2 < d1 / 8.0);  // fourth-order quadrature
}

TEST_CASE("picard cross-check against the time stepper") {
    PicardConfig cfg;
    cfg.r = 0.5;
    cfg.grid_points = 17;
    const int n = gaussian_trunc_for(0.5, 0.5);
    SpectralState g = gaussian_data(0.5, n);
    PicardResult res = picard_solve(g, kParams, cfg);

    const double big_t = res.T_certified;
    const int m = cfg.grid_points - 1;
    const int sub = 64;  // integrator steps per quadrature interval
    EvolveOptions opts;
    opts.store_stride = sub;
    auto [fwd, rec_f] = evolve(g, kParams, big_t, big_t / (m * sub), opts);
    auto [bwd, rec_b] = evolve(g, kParams, -big_t, big_t / (m * sub), opts);

    double worst = 0.0;
    for (int j = 0; j <= m; ++j) {
        // sup-t distance in the half-radius analytic norm
        const SpectralState& pic_f = res.trajectory.state(static_cast<std::size_t>(m + j));
        const SpectralState& pic_b = res.trajectory.state(static_cast<std::size_t>(m - j));
        double df = 0.0, db = 0.0;
        for (int k = -n; k <= n; ++k) {
            double w = std::exp(0.25 * std::abs(k));
            df += w * std::abs(pic_f.at(k) - fwd.state(static_cast<std::size_t>(j)).at(k));
            db += w * std::abs(pic_b.at(k) - bwd.state(static_cast<std::size_t>(j)).at(k));
        }
        worst = std::max({worst, df, db});
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("tlambda scan: horizon grows with lambda") {
    PicardConfig cfg;
    cfg.grid_points = 17;
    std::vector<TlambdaRow> rows = tlambda_scan({0.2, 0.4}, kParams, cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].t_certified < rows[1].t_certified);
    CHECK(rows[0].ar == doctest::Approx(3.453779802994032).epsilon(1e-9));
    CHECK(rows[1].dispersion_length == doctest::Approx(0.4 * 0.4 / 0.4));
}

TEST_CASE("picard: frozen regression values for the lambda = 1/2 gaussian") {
    // values pinned after the first verified run at the tail-rule truncation
    PicardConfig cfg;
    cfg.r = 0.5;
    SpectralState g = gaussian_data(0.5, gaussian_trunc_for(0.5, 0.5));
    PicardResult res = picard_solve(g, kParams, cfg);
    CHECK(res.data_ar_norm == doctest::Approx(3.417888502812618).epsilon(1e-12));
    CHECK(res.T_certified == doctest::Approx(6.687660961355374e-4).epsilon(1e-12));
    CHECK(res.c_used == 1.0 / 64.0);  // no horizon halvings needed
    CHECK(res.halvings == 0);
    REQUIRE(!res.contraction_history.empty());
    for (std::size_t i = 1; i < res.contraction_history.size(); ++i)
        CHECK(res.contraction_history[i] < 1.05 * res.contraction_history[i - 1]);  // geometric decay
    CHECK(res.contraction_history.back() <= 0.5);
}
