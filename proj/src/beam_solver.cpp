#include "foamswell/beam_solver.hpp"

#include "foamswell/banded.hpp"
#include "foamswell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace foamswell {

namespace {

// Newmark average acceleration: with d = u^{n+1},
//   a(d) = (4/dt^2)(d - u - dt v) - a_prev,   v(d) = (2/dt)(d - u) - v_prev.
struct NewmarkUpdate {
    const DeformationSnapshot& prev;
    double dt;

    double accel(const GridFunction& d, std::size_t j) const {
        return 4.0 / (dt * dt) * (d[j] - prev.u[j] - dt * prev.v[j]) - prev.a[j];
    }
    double vel(const GridFunction& d, std::size_t j) const {
        return 2.0 / dt * (d[j] - prev.u[j]) - prev.v[j];
    }
    double d_accel_dd() const { return 4.0 / (dt * dt); }
    double d_vel_dd() const { return 2.0 / dt; }
};

// u_xxxx by the 5-point stencil; hinged ends eliminate the ghosts by odd
// reflection: u(-h) = 2u(0)-u(1), u(1+h) = 2u(N)-u(N-1).
double fourth_difference(const GridFunction& d, std::size_t j) {
    const std::size_t n = d.cells();
    const double h4 = std::pow(d.h(), 4);
    if (j == 1) return (-2.0 * d[0] + 5.0 * d[1] - 4.0 * d[2] + d[3]) / h4;
    if (j == n - 1) return (d[n - 3] - 4.0 * d[n - 2] + 5.0 * d[n - 1] - 2.0 * d[n]) / h4;
    return (d[j - 2] - 4.0 * d[j - 1] + 6.0 * d[j] - 4.0 * d[j + 1] + d[j + 2]) / h4;
}

// One-sided third difference at x=1, first order.
double third_difference_right(const GridFunction& d) {
    const std::size_t n = d.cells();
    const double h3 = std::pow(d.h(), 3);
    return (d[n] - 3.0 * d[n - 1] + 3.0 * d[n - 2] - d[n - 3]) / h3;
}

// Edge stress on cell j: f(u_x) + k_v u_xt + averaged nu(p_hat). The velocity
// gradient comes from the Newmark velocity of the candidate.
struct EdgeStress {
    const BeamProblem& prob;
    const GridFunction& nu_nodal;   // nu(p_hat) at nodes

    double operator()(const GridFunction& d, const NewmarkUpdate& nm, std::size_t j) const {
        const double h = d.h();
        const double g = (d[j + 1] - d[j]) / h;
        if (!(g > 0.0))
            throw SingularConfigurationError(
                "beam: non-positive gradient in cell " + std::to_string(j));
        const double gv = (nm.vel(d, j + 1) - nm.vel(d, j)) / h;
        return elastic_response(g, prob.constants.k) + prob.constants.k_v * gv +
               0.5 * (nu_nodal[j] + nu_nodal[j + 1]);
    }
};

GridFunction nu_of(const GridFunction& p_hat, const BoundedLipschitzLaw& nu) {
    GridFunction out(p_hat.cells());
    for (std::size_t j = 0; j < p_hat.nodes(); ++j) out[j] = nu(p_hat[j]);
    return out;
}

} // namespace

GridFunction beam_residual(const GridFunction& candidate,
                           const DeformationSnapshot& previous,
                           const GridFunction& p_hat, double t_new,
                           const BeamProblem& prob) {
    const std::size_t n = candidate.cells();
    const double h = candidate.h();
    const auto& pc = prob.constants;
    const NewmarkUpdate nm{previous, prob.dt};
    const GridFunction nu_nodal = nu_of(p_hat, prob.nu);
    const EdgeStress stress{prob, nu_nodal};

    GridFunction r(n);
    r[0] = candidate[0];
    double s_right = stress(candidate, nm, 0);
    for (std::size_t j = 1; j < n; ++j) {
        const double s_left = s_right;
        s_right = stress(candidate, nm, j);
        r[j] = pc.m * nm.accel(candidate, j) + pc.gamma * fourth_difference(candidate, j) -
               (s_right - s_left) / h;
        if (prob.source) r[j] -= prob.source(t_new, candidate.x(j));
    }
    // natural boundary row: -gamma u_xxx + f + k_v u_xt + nu + phi(s) = q
    const double g_last = (candidate[n] - candidate[n - 1]) / h;
    if (!(g_last > 0.0))
        throw SingularConfigurationError("beam: non-positive gradient in last cell");
    const double gv_last = (nm.vel(candidate, n) - nm.vel(candidate, n - 1)) / h;
    r[n] = -pc.gamma * third_difference_right(candidate) +
           elastic_response(g_last, pc.k) + pc.k_v * gv_last + nu_nodal[n] +
           prob.phi(candidate[n]);
    if (prob.boundary_source) r[n] -= prob.boundary_source(t_new);
    return r;
}

void assemble_beam_jacobian(BandedMatrix& jac, const GridFunction& d,
                            const DeformationSnapshot& previous,
                            const BeamProblem& prob) {
    const int n = static_cast<int>(d.cells());
    const double h = d.h();
    const auto& pc = prob.constants;
    const NewmarkUpdate nm{previous, prob.dt};
    const double dvel = nm.d_vel_dd();

    jac.zero();
    jac.at(0, 0) = 1.0;

    const double h4 = std::pow(h, 4);
    auto add_d4_row = [&](int j) {
        if (j == 1) {
            jac.add(1, 0, -2.0 * pc.gamma / h4);
            jac.add(1, 1, 5.0 * pc.gamma / h4);
            jac.add(1, 2, -4.0 * pc.gamma / h4);
            jac.add(1, 3, pc.gamma / h4);
        } else if (j == n - 1) {
            jac.add(j, j - 2, pc.gamma / h4);
            jac.add(j, j - 1, -4.0 * pc.gamma / h4);
            jac.add(j, j, 5.0 * pc.gamma / h4);
            jac.add(j, j + 1, -2.0 * pc.gamma / h4);
        } else {
            jac.add(j, j - 2, pc.gamma / h4);
            jac.add(j, j - 1, -4.0 * pc.gamma / h4);
            jac.add(j, j, 6.0 * pc.gamma / h4);
            jac.add(j, j + 1, -4.0 * pc.gamma / h4);
            jac.add(j, j + 2, pc.gamma / h4);
        }
    };

    // d(stress on cell c)/d(d_{c+1}) = fp/h + k_v*dvel/h, and the negative for d_c
    std::vector<double> edge(n);
    for (int c = 0; c < n; ++c) {
        const double g = (d[c + 1] - d[c]) / h;
        edge[c] = (elastic_response_derivative(g, pc.k) + pc.k_v * dvel) / h;
    }

    for (int j = 1; j < n; ++j) {
        jac.add(j, j, pc.m * nm.d_accel_dd());
        add_d4_row(j);
        // -(S_{j+1/2} - S_{j-1/2})/h
        jac.add(j, j + 1, -edge[j] / h);
        jac.add(j, j, (edge[j] + edge[j - 1]) / h);
        jac.add(j, j - 1, -edge[j - 1] / h);
    }

    const double h3 = std::pow(h, 3);
    jac.add(n, n, -pc.gamma / h3);
    jac.add(n, n - 1, 3.0 * pc.gamma / h3);
    jac.add(n, n - 2, -3.0 * pc.gamma / h3);
    jac.add(n, n - 3, pc.gamma / h3);
    const double g_last = (d[n] - d[n - 1]) / h;
    const double c_last = (elastic_response_derivative(g_last, pc.k) + pc.k_v * dvel) / h;
    jac.add(n, n, c_last + prob.phi.derivative(d[n]));
    jac.add(n, n - 1, -c_last);
}

namespace {
double min_gradient(const GridFunction& d) { return d.min_cell_gradient(); }
} // namespace

BeamStepResult step_beam(const DeformationSnapshot& previous,
                         const GridFunction& p_hat, double t_new,
                         const BeamProblem& prob) {
    const std::size_t n = previous.u.cells();
    const NewmarkUpdate nm{previous, prob.dt};

    // Convergence is judged on the residual scaled by the dominant row
    // diagonal (the acceleration and bending terms), i.e. in displacement
    // units; the raw rows grow like 4m/dt^2 and an absolute test would sit
    // below the round-off floor for small dt.
    const double h = previous.u.h();
    const double rscale = std::max({1.0, 4.0 * prob.constants.m / (prob.dt * prob.dt),
                                    prob.constants.gamma / (h * h * h * h)});

    // predictor: drift with the old velocity, falling back to the old state
    // if the drift already violates positivity
    GridFunction d = previous.u;
    for (std::size_t j = 0; j <= n; ++j) d[j] += prob.dt * previous.v[j];
    if (!(min_gradient(d) > prob.gradient_floor)) d = previous.u;

    BandedMatrix jac(static_cast<int>(n) + 1, 3, 2);
    GridFunction r = beam_residual(d, previous, p_hat, t_new, prob);
    double rnorm = max_abs(r);
    int iters = 0;

    while (rnorm > prob.newton_tol * rscale) {
        if (iters >= prob.newton_max_iter) {
            std::ostringstream os;
            os << "beam Newton stalled at residual " << rnorm << " after " << iters
               << " iterations";
            throw SolverError(os.str(), rnorm, iters);
        }
        assemble_beam_jacobian(jac, d, previous, prob);
        jac.factor();
        std::vector<double> delta = r.values();
        jac.solve(delta);

        // line search: shrink until every cell gradient stays above the floor
        // (the role the singular f plays in the continuum), then a few more
        // halvings if the residual refuses to decrease
        double lambda = 1.0;
        GridFunction trial = d;
        auto apply = [&](double lam) {
            for (std::size_t j = 0; j <= n; ++j) trial[j] = d[j] - lam * delta[j];
        };
        apply(lambda);
        int halvings = 0;
        while (!(min_gradient(trial) > prob.gradient_floor)) {
            if (++halvings > 60)
                throw SingularConfigurationError(
                    "beam line search cannot maintain gradient positivity");
            lambda *= 0.5;
            apply(lambda);
        }
        GridFunction r_trial = beam_residual(trial, previous, p_hat, t_new, prob);
        double rnorm_trial = max_abs(r_trial);
        int backtracks = 0;
        while (rnorm_trial > rnorm && backtracks < 8) {
            lambda *= 0.5;
            apply(lambda);
            r_trial = beam_residual(trial, previous, p_hat, t_new, prob);
            rnorm_trial = max_abs(r_trial);
            ++backtracks;
        }
        d = trial;
        r = std::move(r_trial);
        rnorm = rnorm_trial;
        ++iters;
    }

    BeamStepResult out;
    out.newton_iters = iters;
    out.residual_norm = rnorm / rscale;
    GridFunction v_new(n), a_new(n);
    for (std::size_t j = 0; j <= n; ++j) {
        v_new[j] = nm.vel(d, j);
        a_new[j] = nm.accel(d, j);
    }
    out.next = DeformationSnapshot{std::move(d), std::move(v_new), std::move(a_new)};
    return out;
}

double beam_energy(const DeformationSnapshot& snap, const BeamProblem& prob) {
    const auto& pc = prob.constants;
    const double kinetic = 0.5 * pc.m * trapezoid_of_squares(snap.v);
    GridFunction uxx(second_difference(snap.u, 0.0, 0.0));
    const double bending = 0.5 * pc.gamma * trapezoid_of_squares(uxx);
    // k/4 (g^2 - g) + k/(8 g^2) summed over cells is the primitive of f
    const double elastic = cell_gradient_quadrature(snap.u, [&](double g) {
        return elastic_response_primitive(g, pc.k);
    });
    return kinetic + bending + elastic + prob.phi.primitive(snap.s());
}

double compatibility_residual(const GridFunction& u0, const GridFunction& v0,
                              const GridFunction& p_hat0, const BeamProblem& prob) {
    const std::size_t n = u0.cells();
    const double h = u0.h();
    const auto& pc = prob.constants;
    const double g_last = (u0[n] - u0[n - 1]) / h;
    if (!(g_last > 0.0))
        throw SingularConfigurationError("compatibility: non-positive last-cell gradient");
    const double gv_last = (v0[n] - v0[n - 1]) / h;
    return -pc.gamma * third_difference_right(u0) + elastic_response(g_last, pc.k) +
           pc.k_v * gv_last + prob.nu(p_hat0[n]) + prob.phi(u0[n]);
}

double solve_compatibility_slope(const GridFunction& u0, const GridFunction& v0_rest,
                                 const GridFunction& p_hat0, const BeamProblem& prob) {
    // residual is affine in beta with slope k_v * (x_N - x_{N-1})/h = k_v
    const double r0 = compatibility_residual(u0, v0_rest, p_hat0, prob);
    return -r0 / prob.constants.k_v;
}

GridFunction consistent_acceleration(const GridFunction& u, const GridFunction& v,
                                     const GridFunction& p_hat, double t,
                                     const BeamProblem& prob) {
    const std::size_t n = u.cells();
    const double h = u.h();
    const auto& pc = prob.constants;
    const GridFunction nu_nodal = nu_of(p_hat, prob.nu);

    auto edge_stress = [&](std::size_t j) {
        const double g = (u[j + 1] - u[j]) / h;
        if (!(g > 0.0))
            throw SingularConfigurationError("consistent_acceleration: non-positive gradient");
        const double gv = (v[j + 1] - v[j]) / h;
        return elastic_response(g, pc.k) + pc.k_v * gv + 0.5 * (nu_nodal[j] + nu_nodal[j + 1]);
    };

    GridFunction a(n);
    a[0] = 0.0;
    double s_right = edge_stress(0);
    for (std::size_t j = 1; j < n; ++j) {
        const double s_left = s_right;
        s_right = edge_stress(j);
        double load = -pc.gamma * fourth_difference(u, j) + (s_right - s_left) / h;
        if (prob.source) load += prob.source(t, u.x(j));
        a[j] = load / pc.m;
    }
    // boundary row is algebraic; this value is bookkeeping only
    a[n] = 2.0 * a[n - 1] - a[n - 2];
    return a;
}

DeformationSnapshot make_snapshot(const GridFunction& u, const GridFunction& v,
                                  const GridFunction& p_hat, double t,
                                  const BeamProblem& prob) {
    return DeformationSnapshot{u, v, consistent_acceleration(u, v, p_hat, t, prob)};
}

} // namespace foamswell
