#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "t3nls/nonlinear.hpp"

using namespace t3nls;

TEST_CASE("phase: resonant triples vanish") {
    EquationParams p{2.3, -0.7, 0, 0, 0};
    CHECK(phase_phi(p, 1, -1, 5) == 0.0);
    CHECK(phase_phi(p, 4, 2, -2) == 0.0);
}

TEST_CASE("phase: cubic-difference oracle values") {
    EquationParams p1{1.0, 0.0, 0, 0, 0};
    // 27 - 1 - 1 - 1
    CHECK(phase_phi(p1, 1, 1, 1) == doctest::Approx(24.0).epsilon(1e-14));
    EquationParams p2{1.0, 1.0, 0, 0, 0};
    // (729 + 81) - (8 + 4) + (-27 + 9) - (64 + 16)
    CHECK(phase_phi(p2, 2, 3, 4) == doctest::Approx(700.0).epsilon(1e-14));
}

TEST_CASE("phase: factored equals expanded") {
    EquationParams p{1.0, 0.4, 0, 0, 0};
    for (long k1 = -20; k1 <= 20; ++k1)
        for (long k2 = -20; k2 <= 20; ++k2)
            for (long k3 = -20; k3 <= 20; ++k3) {
                double f = phase_phi(p, k1, k2, k3);
                double e = phase_phi_expanded(p, k1, k2, k3);
                CHECK(std::abs(f - e) <= 1e-9 * std::max({1.0, std::abs(f), std::abs(e)}));
            }

    // exact in rational arithmetic when coefficients are rational
    Rational a1(2), a2(1, 3);
    for (long k1 = -12; k1 <= 12; ++k1)
        for (long k2 = -12; k2 <= 12; ++k2)
            for (long k3 = -12; k3 <= 12; ++k3)
                CHECK(phase_phi_factored_rational(a1, a2, k1, k2, k3) ==
                      phase_phi_expanded_rational(a1, a2, k1, k2, k3));
}

TEST_CASE("phase: zero set is exactly the resonant set") {
    EquationParams p{1.0, 0.4, 0, 0, 1.0};
    REQUIRE(p.satisfies_nonresonance());
    for (long k1 = -20; k1 <= 20; ++k1)
        for (long k2 = -20; k2 <= 20; ++k2)
            for (long k3 = -20; k3 <= 20; ++k3) {
                bool resonant = (k1 + k2) * (k2 + k3) == 0;
                double f = phase_phi(p, k1, k2, k3);
                if (resonant) CHECK(f == 0.0);
                else CHECK(std::abs(f) > 1e-9);
            }
}

TEST_CASE("phase: alpha1 = 0 variant") {
    EquationParams p{0.0, 1.5, 0, 0, 0};
    CHECK(phase_phi(p, 2, 1, 4) == doctest::Approx(2.0 * 1.5 * 3.0 * 5.0).epsilon(1e-14));
}

TEST_CASE("nonresonance violated flag") {
    EquationParams good{1.0, 0.4, 0, 0, 1.0};
    CHECK(good.satisfies_nonresonance());
    EquationParams bad{1.0, 1.5, 0, 0, 1.0};  // 2*1.5/3 = 1
    CHECK_FALSE(bad.satisfies_nonresonance());
    EquationParams nogamma{1.0, 0.4, 0, 0, 0.0};
    CHECK_FALSE(nogamma.satisfies_nonresonance());
}

TEST_CASE("region classification") {
    CHECK(classify(5, 4, 6) == RegionTag::D1);
    CHECK(classify(100, 1, 1) == RegionTag::D2_1);
    CHECK(classify(1, -1, 5) == RegionTag::Resonant);
    CHECK(classify(1, 100, 1) == RegionTag::D2_2);
    CHECK(classify(1, 1, 100) == RegionTag::D2_3);
    CHECK(classify(1, -3, 30) == RegionTag::D2_3);

    // partition: within D exactly one tag; dominant slots mutually exclusive
    for (long k1 = -12; k1 <= 12; ++k1)
        for (long k2 = -12; k2 <= 12; ++k2)
            for (long k3 = -12; k3 <= 12; ++k3) {
                RegionTag tag = classify(k1, k2, k3);
                if (!oracles::in_d(k1, k2, k3)) {
                    CHECK(tag == RegionTag::Resonant);
                    continue;
                }
                CHECK(tag != RegionTag::Resonant);
                if (oracles::in_d1(k1, k2, k3)) CHECK(tag == RegionTag::D1);
                else CHECK((tag == RegionTag::D2Plain || tag == RegionTag::D2_1 ||
                            tag == RegionTag::D2_2 || tag == RegionTag::D2_3));
                int dominant = 0;
                long a1 = std::labs(k1), a2 = std::labs(k2), a3 = std::labs(k3);
                if (a1 > 4 * std::max(a2, a3)) ++dominant;
                if (a2 > 4 * std::max(a1, a3)) ++dominant;
                if (a3 > 4 * std::max(a1, a2)) ++dominant;
                CHECK(dominant <= 1);
            }
}

TEST_CASE("region classification: schrodinger variant") {
    CHECK(classify(1, 100, 1, RegionVariant::Schrodinger) == RegionTag::D2Prime);
    CHECK(classify(30, 4, 1, RegionVariant::Schrodinger) == RegionTag::D1Prime);
    CHECK(classify(1, -1, 5, RegionVariant::Schrodinger) == RegionTag::Resonant);
    for (long k1 = -10; k1 <= 10; ++k1)
        for (long k2 = -10; k2 <= 10; ++k2)
            for (long k3 = -10; k3 <= 10; ++k3) {
                RegionTag tag = classify(k1, k2, k3, RegionVariant::Schrodinger);
                if (!oracles::in_d(k1, k2, k3)) CHECK(tag == RegionTag::Resonant);
                else CHECK((tag == RegionTag::D1Prime || tag == RegionTag::D2Prime));
            }
}

TEST_CASE("rhs_full: zero state and plane-wave closure") {
    EquationParams p{1.0, 0.4, 2.0, 0.0, 0.0};
    SpectralState z(8);
    CHECK(oracles::max_abs(rhs_full(z, p)) == 0.0);

    SpectralState one(8);
    one.at(0) = std::sqrt(two_pi);
    SpectralState r = rhs_full(one, p);
    CHECK(std::abs(r.at(0) - cplx(0.0, 2.0 * std::sqrt(two_pi))) < 1e-12);
    for (int k = -8; k <= 8; ++k)
        if (k != 0) CHECK(std::abs(r.at(k)) < 1e-13);
}

TEST_CASE("rhs_full equals scatter-sum oracle") {
    std::mt19937 rng(31);
    EquationParams p{1.0, 0.4, 1.0, 1.0, 1.0};
    SpectralState u = oracles::random_state(8, rng);
    SpectralState got = rhs_full(u, p);
    SpectralState ref = oracles::triple_sum(u, u, u, [&](long k1, long k2, long k3) {
        return (cplx(0.0, p.gamma1 + p.gamma2 * static_cast<double>(k1 + k2 + k3)) +
                cplx(p.Gamma * static_cast<double>(k1 + k2), 0.0)) / two_pi;
    });
    for (int k = -8; k <= 8; ++k) {
        double kk = k;
        ref.at(k) += cplx(0.0, -(p.alpha1 * kk * kk * kk + p.alpha2 * kk * kk)) * u.at(k);
    }
    CHECK(oracles::max_abs_diff(got, ref) < 1e-12);

    cplx rot = std::polar(1.0, 1.13);
    CHECK(oracles::max_abs_diff(rhs_full(rot * u, p), rot * rhs_full(u, p)) < 1e-12);
}

TEST_CASE("raman split") {
    SpectralState single(6);
    single.at(2) = cplx(0.7, -0.4);
    auto [i1_s, i2_s] = raman_resonant_split(single);
    CHECK(oracles::max_abs(i2_s) == 0.0);

    SpectralState two(4);
    two.at(1) = 1.0;
    two.at(2) = cplx(0.0, 1.0);
    auto [i1, i2] = raman_resonant_split(two);
    CHECK(std::abs(i2.at(1) - cplx(1.0 / two_pi, 0.0)) < 1e-15);
    CHECK(std::abs(i2.at(2) - cplx(0.0, -1.0 / two_pi)) < 1e-15);

    std::mt19937 rng(37);
    SpectralState u = oracles::random_state(8, rng);
    auto [j1, j2] = raman_resonant_split(u);
    SpectralState full = oracles::triple_sum(u, u, u, [](long k1, long k2, long) {
        return cplx(-static_cast<double>(k1 + k2) / two_pi, 0.0);
    });
    CHECK(oracles::max_abs_diff(j1 + j2, full) < 1e-12);
}

TEST_CASE("resonant closed form") {
    SpectralState two(4);
    two.at(1) = 1.0;
    two.at(2) = cplx(0.0, 1.0);
    SpectralState closed = i2_closed_form(two);
    CHECK(std::abs(closed.at(1) - cplx(1.0 / two_pi, 0.0)) < 1e-15);
    CHECK(std::abs(closed.at(2) - cplx(0.0, -1.0 / two_pi)) < 1e-15);

    SpectralState single(6);
    single.at(-3) = cplx(1.2, 0.5);
    CHECK(oracles::max_abs(i2_closed_form(single)) < 1e-15);

    std::mt19937 rng(41);
    for (int rep = 0; rep < 5; ++rep) {
        SpectralState u = oracles::random_state(16, rng);
        auto [i1, i2] = raman_resonant_split(u);
        CHECK(oracles::max_abs_diff(i2, i2_closed_form(u)) < 1e-12);
    }
}
