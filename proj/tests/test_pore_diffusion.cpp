#include "foamswell/pore_diffusion.hpp"

#include "foamswell/banded.hpp"
#include "foamswell/errors.hpp"
#include "foamswell/verify_suites.hpp"
#include "support/test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace foamswell;
using namespace foamswell::test;

namespace {

DiffusionProblem heat_problem(std::size_t cells, double dt) {
    DiffusionProblem prob;
    prob.rho = DensityLaw::linear(1.0, 0.0);
    prob.cells = cells;
    prob.dt = dt;
    return prob;
}

} // namespace

TEST_CASE("constant state has zero residual under both advection schemes") {
    for (auto scheme : {AdvectionScheme::central, AdvectionScheme::upwind}) {
        DiffusionProblem prob = heat_problem(64, 1e-3);
        prob.rho = DensityLaw(1.0, 0.5, 1.0, 2.0);
        prob.advection = scheme;
        const auto p = sample(64, [](double) { return 1.7; });
        const auto vb = GridFunction(64, 0.0);
        const auto r = diffusion_residual(p, p, 1.0, 0.0, vb, 0.5, prob);
        CHECK(max_abs(r) < 1e-14);
    }
}

TEST_CASE("steady constant input returns unchanged with no Newton work") {
    DiffusionProblem prob = heat_problem(64, 1e-3);
    const auto p = sample(64, [](double) { return 0.4; });
    const auto vb = GridFunction(64, 0.0);
    const auto res = step_diffusion(p, 1.0, 0.0, vb, prob.dt, prob);
    CHECK(res.newton_iters <= 1);
    CHECK(max_abs_diff(res.next, p) < 1e-14);

    // causality over a run: with every source off the constant never moves
    GridFunction q = p;
    for (int i = 1; i <= 50; ++i)
        q = step_diffusion(q, 1.0, 0.0, vb, i * prob.dt, prob).next;
    CHECK(max_abs_diff(q, p) == 0.0);
}

TEST_CASE("heat-equation limit: first cosine mode decays at kappa pi^2 within 2%") {
    const std::size_t cells = 128;
    DiffusionProblem prob = heat_problem(cells, 1e-4);
    prob.constants.kappa = 1.0;
    const auto vb = GridFunction(cells, 0.0);

    GridFunction p = sample(cells, [](double x) { return std::cos(M_PI * x); });
    auto amplitude = [&](const GridFunction& f) {
        // project on cos(pi x): trapezoid of f * mode / (1/2)
        GridFunction prod(cells);
        for (std::size_t j = 0; j <= cells; ++j)
            prod[j] = f[j] * std::cos(M_PI * prod.x(j));
        return 2.0 * trapezoid(prod);
    };
    const double a0 = amplitude(p);
    const int steps = 1000;
    for (int i = 1; i <= steps; ++i)
        p = step_diffusion(p, 1.0, 0.0, vb, i * prob.dt, prob).next;
    const double t = steps * prob.dt;
    const double rate = -std::log(amplitude(p) / a0) / t;
    CHECK(std::abs(rate - M_PI * M_PI) / (M_PI * M_PI) < 0.02);
}

TEST_CASE("manufactured moving-domain solution: residual refinement slope") {
    const verify::PoreMMS mms;
    const double t = 0.5, dt = 1e-2;
    auto interior_norm = [&](std::size_t cells) {
        const auto prob = mms.problem(cells, dt);
        const auto r = diffusion_residual(mms.exact(t, cells), mms.exact(t - dt, cells),
                                          mms.s(t), mms.s_dot(), mms.v_bar(cells), t, prob);
        double acc = 0.0;
        for (std::size_t j = 1; j < cells; ++j) acc += r[j] * r[j];
        return std::sqrt(acc * r.h());
    };
    const double e1 = interior_norm(48), e2 = interior_norm(96);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("nonlinear density: solution matches 4x-finer run at first order") {
    const std::size_t cells = 96;
    DiffusionProblem prob;
    prob.rho = DensityLaw(1.0, 0.5, 1.0, 2.0);
    prob.psi = BoundedLipschitzLaw(0.2, 1.0, 1.0);
    prob.h0 = BoundarySource(0.05);
    prob.cells = cells;
    const auto p0 = sample(cells, [](double x) { return 1.0 + 0.2 * std::cos(M_PI * x); });

    auto march = [&](double dt) {
        prob.dt = dt;
        GridFunction p = p0;
        const auto steps = static_cast<std::size_t>(std::llround(0.4 / dt));
        for (std::size_t i = 1; i <= steps; ++i) {
            const double t = i * dt;
            const double s = 1.0 + 0.05 * t;
            const auto vb = sample(cells, [](double x) { return 0.05 * x; });
            p = step_diffusion(p, s, 0.05, vb, t, prob).next;
        }
        return p;
    };
    const auto ref = march(1e-3);
    const double e_coarse = max_abs_diff(march(8e-3), ref);
    const double e_fine = max_abs_diff(march(4e-3), ref);
    // errors vs near-exact reference behave like C dt: ratio ~ (8-1)/(4-1)... use
    // Richardson instead: (e8 - e4) ~ C*4e-3, so e8/e4 in the first-order band
    CHECK(e_coarse / e_fine == doctest::Approx(2.0).epsilon(0.35));
}

TEST_CASE("discrete mass identity telescopes to solver tolerance") {
    // s (Q(rho c) - Q(rho q))/dt + s' Q(rho c) + s' psi(s) = -h0 exactly
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const std::size_t cells = 64;
    DiffusionProblem prob;
    prob.rho = DensityLaw(1.0, 0.5, 1.0, 2.0);
    prob.psi = BoundedLipschitzLaw(0.2, 1.0, 1.0);
    prob.h0 = BoundarySource(0.07);
    prob.cells = cells;
    prob.dt = 2e-3;
    prob.newton_tol = 1e-12;

    for (int trial = 0; trial < 5; ++trial) {
        const double s = 0.8 + 0.4 * std::abs(unit(rng));
        const double s_dot = 0.3 * unit(rng);
        auto vb = sample(cells, [&](double x) { return s_dot * x * (1.0 + 0.2 * (1 - x)); });
        vb[0] = 0.0;
        vb[cells] = s_dot;  // the pullback pins both endpoints
        GridFunction p0(cells);
        for (std::size_t j = 0; j <= cells; ++j)
            p0[j] = 1.0 + 0.3 * unit(rng) * std::cos(M_PI * p0.x(j));

        const auto res = step_diffusion(p0, s, s_dot, vb, 0.5, prob);
        auto qmass = [&](const GridFunction& p) {
            GridFunction w(cells);
            for (std::size_t j = 0; j <= cells; ++j) w[j] = prob.rho.rho(p[j]);
            return trapezoid(w);
        };
        const double lhs = s * (qmass(res.next) - qmass(p0)) / prob.dt +
                           s_dot * qmass(res.next) + s_dot * prob.psi(s);
        CHECK(std::abs(lhs + prob.h0(0.5)) < 1e-8);
    }
}

TEST_CASE("boundary flux sign: positive h0 drains mass at -h0 per unit time") {
    const std::size_t cells = 64;
    DiffusionProblem prob = heat_problem(cells, 1e-3);
    prob.rho = DensityLaw::linear(1.0, 2.0);
    prob.h0 = BoundarySource(0.5);
    const auto vb = GridFunction(cells, 0.0);
    const auto p0 = sample(cells, [](double) { return 1.0; });

    const double m0 = liquid_mass(p0, 1.0, prob.rho, 0.0);
    const auto res = step_diffusion(p0, 1.0, 0.0, vb, prob.dt, prob);
    const double m1 = liquid_mass(res.next, 1.0, prob.rho, 0.0);
    CHECK((m1 - m0) / prob.dt == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(m1 < m0);
}

TEST_CASE("liquid mass closed forms") {
    const auto p2 = sample(64, [](double) { return 2.0; });
    CHECK(liquid_mass(p2, 0.5, DensityLaw::linear(1.0, 0.0), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-14));

    const auto p0 = sample(64, [](double) { return 0.0; });
    const DensityLaw rho(1.0, 0.3, 1.0, 1.7);  // rho(0) = w0 = 1.7
    const double q = 0.42;
    CHECK(liquid_mass(p0, 1.0, rho, q) == doctest::Approx(1.7 + q).epsilon(1e-14));

    // smooth field: trapezoid vs 10x finer grid
    auto pf = [](double x) { return 1.0 + 0.3 * std::sin(2.0 * x); };
    const double coarse = liquid_mass(sample(64, pf), 1.3, rho, 0.0);
    const double fine = liquid_mass(sample(640, pf), 1.3, rho, 0.0);
    CHECK(std::abs(coarse - fine) < 1e-4);
}

TEST_CASE("analytic Jacobian matches finite-difference columns (both schemes)") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto scheme : {AdvectionScheme::central, AdvectionScheme::upwind}) {
        DiffusionProblem prob;
        prob.rho = DensityLaw(1.0, 0.5, 1.0, 2.0);
        prob.psi = BoundedLipschitzLaw(0.2, 1.0, 1.0);
        prob.h0 = BoundarySource(0.03);
        prob.cells = 16;
        prob.dt = 1e-3;
        prob.advection = scheme;

        GridFunction c(16), q(16), vb(16);
        for (std::size_t j = 0; j <= 16; ++j) {
            c[j] = 1.0 + 0.3 * unit(rng);
            q[j] = c[j] + 0.05 * unit(rng);
            vb[j] = 0.2 * unit(rng);
        }
        const double s = 1.2, s_dot = 0.15;

        BandedMatrix jac(17, 1, 1);
        assemble_diffusion_jacobian(jac, c, vb, s, s_dot, prob);
        const BandedMatrix& jref = jac;  // const access reads 0 outside the band
        double scale = 0.0;
        for (int col = 0; col <= 16; ++col)
            for (int row = std::max(0, col - 1); row <= std::min(16, col + 1); ++row)
                scale = std::max(scale, std::abs(jref.at(row, col)));

        const double h = 1e-7;
        for (int col = 0; col <= 16; ++col) {
            auto plus = c, minus = c;
            plus[col] += h;
            minus[col] -= h;
            const auto rp = diffusion_residual(plus, q, s, s_dot, vb, 0.1, prob);
            const auto rm = diffusion_residual(minus, q, s, s_dot, vb, 0.1, prob);
            for (int row = 0; row <= 16; ++row) {
                const double fd = (rp[row] - rm[row]) / (2.0 * h);
                CHECK(std::abs(jref.at(row, col) - fd) <= 1e-5 * scale);
            }
        }
    }
}

TEST_CASE("degenerate domain rejected") {
    DiffusionProblem prob = heat_problem(16, 1e-3);
    const auto p = sample(16, [](double) { return 1.0; });
    const auto vb = GridFunction(16, 0.0);
    CHECK_THROWS_AS(step_diffusion(p, 0.0, 0.0, vb, 0.1, prob),
                    SingularConfigurationError);
    CHECK_THROWS_AS(diffusion_residual(p, p, -1.0, 0.0, vb, 0.1, prob),
                    SingularConfigurationError);
}

TEST_CASE("upwind scheme: coarse manufactured slope stays near first order") {
    verify::PoreMMS mms;
    const double t = 0.5, dt = 1e-2;
    auto interior_norm = [&](std::size_t cells) {
        auto prob = mms.problem(cells, dt);
        prob.advection = AdvectionScheme::upwind;
        const auto r = diffusion_residual(mms.exact(t, cells), mms.exact(t - dt, cells),
                                          mms.s(t), mms.s_dot(), mms.v_bar(cells), t, prob);
        double acc = 0.0;
        for (std::size_t j = 1; j < cells; ++j) acc += r[j] * r[j];
        return std::sqrt(acc * r.h());
    };
    const double slope = std::log2(interior_norm(48) / interior_norm(96));
    CHECK(slope > 0.7);   // upwind drift degrades the interior to O(h)
}
