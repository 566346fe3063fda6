#include "foamswell/deformation_map.hpp"

#include "support/test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace foamswell;
using namespace foamswell::test;

TEST_CASE("invert_deformation: identity, linear, clamped extension") {
    const auto id = rest_snapshot(sample(64, [](double x) { return x; }));
    CHECK(invert_deformation(id, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
    CHECK(invert_deformation(id, 0.0) == 0.0);

    const auto two = rest_snapshot(sample(64, [](double x) { return 2.0 * x; }));
    CHECK(invert_deformation(two, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(invert_deformation(two, 3.0) == 1.0);   // y beyond s maps to 1
    CHECK(invert_deformation(two, 2.0) == 1.0);
    CHECK_THROWS_AS(invert_deformation(two, -0.1), std::domain_error);
}

TEST_CASE("invert_deformation: round trip and monotonicity on random snapshots") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> xs(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const auto snap = rest_snapshot(random_monotone(rng, 96));
        for (std::size_t j = 0; j <= 96; ++j) {
            const double x = snap.u.x(j);
            CHECK(invert_deformation(snap, snap.u[j]) == doctest::Approx(x).epsilon(1e-12));
        }
        // and between nodes, against the interpolated forward map
        for (int i = 0; i < 20; ++i) {
            const double x = xs(rng);
            const double y = snap.u.interpolate(x);
            CHECK(invert_deformation(snap, y) == doctest::Approx(x).epsilon(1e-12));
        }
        // nondecreasing in y, across and past the free boundary
        double prev_x = 0.0;
        for (double y = 0.0; y <= snap.s() * 1.2; y += snap.s() * 0.01) {
            const double x = invert_deformation(snap, y);
            CHECK(x >= prev_x - 1e-15);
            prev_x = x;
        }
    }
}

TEST_CASE("pull_back_pressure: affine deformation and constant field shortcuts") {
    const double s = 1.7;
    auto snap = rest_snapshot(sample(64, [&](double x) { return s * x; }));
    const auto p_bar = sample(64, [](double x) { return 2.0 + std::sin(3.0 * x); });
    const auto p_hat = pull_back_pressure(p_bar, snap);
    for (std::size_t j = 0; j <= 64; ++j)
        CHECK(p_hat[j] == doctest::Approx(p_bar[j]).epsilon(1e-13));

    std::mt19937_64 rng(3);
    const auto generic = rest_snapshot(random_monotone(rng, 64));
    const auto constant = sample(64, [](double) { return 4.2; });
    const auto pulled = pull_back_pressure(constant, generic);
    for (std::size_t j = 0; j <= 64; ++j) CHECK(pulled[j] == doctest::Approx(4.2).epsilon(1e-14));
    // endpoint pinning
    CHECK(pull_back_pressure(p_bar, generic).back() == p_bar.back());
}

TEST_CASE("pull_back_pressure: dense-grid oracle converges at O(h^2)") {
    // quadratic deformation, smooth pressure; oracle composes analytically
    auto uf = [](double x) { return x + 0.3 * x * x; };
    auto pf = [](double xi) { return std::cos(2.0 * xi) + 0.5 * xi * xi; };
    const double s = uf(1.0);

    auto error_at = [&](std::size_t cells) {
        const auto snap = rest_snapshot(sample(cells, uf));
        const auto p_bar = sample(cells, pf);
        const auto p_hat = pull_back_pressure(p_bar, snap);
        double err = 0.0;
        for (std::size_t j = 0; j <= cells; ++j) {
            const double exact = pf(uf(p_hat.x(j)) / s);
            err = std::max(err, std::abs(p_hat[j] - exact));
        }
        return err;
    };
    const double e1 = error_at(32), e2 = error_at(64);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("pull_back_velocity: zero, affine, endpoint pinning, convergence") {
    std::mt19937_64 rng(11);
    const auto still = rest_snapshot(random_monotone(rng, 64));
    const auto vz = pull_back_velocity(still);
    for (std::size_t j = 0; j <= 64; ++j) CHECK(vz[j] == 0.0);

    // affine: u = s x, v = c x  =>  v_bar = c x
    const double s = 1.4, c = 0.8;
    DeformationSnapshot aff{sample(64, [&](double x) { return s * x; }),
                            sample(64, [&](double x) { return c * x; }), GridFunction(64)};
    const auto vb = pull_back_velocity(aff);
    for (std::size_t j = 0; j <= 64; ++j)
        CHECK(vb[j] == doctest::Approx(c * vb.x(j)).epsilon(1e-13));
    CHECK(vb.back() == aff.s_dot());
    CHECK(vb[0] == 0.0);

    // generic smooth: dense-composition oracle, O(h^2)
    auto uf = [](double x) { return 1.2 * x + 0.2 * std::sin(M_PI * x); };
    auto vf = [](double x) { return 0.3 * x + 0.1 * std::sin(2.0 * M_PI * x) * x; };
    auto error_at = [&](std::size_t cells) {
        DeformationSnapshot snap{sample(cells, uf), sample(cells, vf), GridFunction(cells)};
        const auto vbar = pull_back_velocity(snap);
        const double sv = uf(1.0);
        double err = 0.0;
        for (std::size_t j = 1; j < cells; ++j) {
            // oracle: solve u(xi) = s x by bisection on the analytic u
            const double y = sv * vbar.x(j);
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (uf(mid) < y ? lo : hi) = mid;
            }
            err = std::max(err, std::abs(vbar[j] - vf(0.5 * (lo + hi))));
        }
        return err;
    };
    const double e1 = error_at(32), e2 = error_at(64);
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.5);
}

TEST_CASE("snapshot invariants") {
    std::mt19937_64 rng(5);
    const auto u = random_monotone(rng, 64);
    const auto snap = rest_snapshot(u);
    CHECK(snap.monotone());
    CHECK(snap.s() == u.back());
    CHECK(snap.s_dot() == 0.0);
    CHECK(snap.u[0] == 0.0);
}
