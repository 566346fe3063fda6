#include "foamswell/pore_diffusion.hpp"

#include "foamswell/banded.hpp"
#include "foamswell/errors.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace foamswell {

namespace {

struct Workspace {
    std::vector<double> rho_c;    // rho(candidate)
    std::vector<double> rho_q;    // rho(previous)
    std::vector<double> flux;     // v_bar * rho(candidate) at nodes
};

void fill(Workspace& w, const GridFunction& c, const GridFunction& q,
          const GridFunction& v_bar, const DensityLaw& rho) {
    const std::size_t m = c.nodes();
    w.rho_c.resize(m);
    w.rho_q.resize(m);
    w.flux.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        w.rho_c[j] = rho.rho(c[j]);
        w.rho_q[j] = rho.rho(q[j]);
        w.flux[j] = v_bar[j] * w.rho_c[j];
    }
}

// First derivative of nodal data: centered inside, one-sided on the boundary
// rows (the summation-by-parts pair of the trapezoid weights).
double d1(const std::vector<double>& f, std::size_t j, std::size_t n, double h) {
    if (j == 0) return (f[1] - f[0]) / h;
    if (j == n) return (f[n] - f[n - 1]) / h;
    return (f[j + 1] - f[j - 1]) / (2.0 * h);
}

// Finite-volume upwind divergence of v_bar*rho on the dual cells.
double upwind_div(const Workspace& w, const GridFunction& v_bar, std::size_t j,
                  std::size_t n, double h) {
    auto edge_flux = [&](std::size_t c) {  // edge between nodes c and c+1
        const double ve = 0.5 * (v_bar[c] + v_bar[c + 1]);
        return ve * (ve >= 0.0 ? w.rho_c[c] : w.rho_c[c + 1]);
    };
    if (j == 0) return (edge_flux(0) - w.flux[0]) / (0.5 * h);
    if (j == n) return (w.flux[n] - edge_flux(n - 1)) / (0.5 * h);
    return (edge_flux(j) - edge_flux(j - 1)) / h;
}

// Drift derivative rho_x at node j; upwinded variant picks the side by the
// sign of the local characteristic speed.
double drift_d1(const std::vector<double>& rc, std::size_t j, std::size_t n, double h,
                double s_dot, double x, AdvectionScheme scheme) {
    if (scheme == AdvectionScheme::central || j == 0 || j == n)
        return d1(rc, j, n, h);
    if (s_dot * x >= 0.0) return (rc[j + 1] - rc[j]) / h;
    return (rc[j] - rc[j - 1]) / h;
}

} // namespace

GridFunction diffusion_residual(const GridFunction& candidate, const GridFunction& previous,
                                double s, double s_dot, const GridFunction& v_bar,
                                double t_new, const DiffusionProblem& prob) {
    if (!(s > 0.0)) throw SingularConfigurationError("diffusion: degenerate domain, s <= 0");
    const std::size_t n = candidate.cells();
    const double h = candidate.h();
    const double kappa = prob.constants.kappa;

    Workspace w;
    fill(w, candidate, previous, v_bar, prob.rho);

    // Neumann gradients encoded by the ghost values
    const double grad_left = s * prob.h0(t_new) / kappa;
    const double grad_right = -s * s_dot * prob.psi(s) / kappa;

    GridFunction r(n);
    for (std::size_t j = 0; j <= n; ++j) {
        double lap;
        if (j == 0)
            lap = (2.0 * candidate[1] - 2.0 * candidate[0]) / (h * h) - 2.0 * grad_left / h;
        else if (j == n)
            lap = (2.0 * candidate[n - 1] - 2.0 * candidate[n]) / (h * h) + 2.0 * grad_right / h;
        else
            lap = (candidate[j - 1] - 2.0 * candidate[j] + candidate[j + 1]) / (h * h);

        const double adv = (prob.advection == AdvectionScheme::upwind)
                               ? upwind_div(w, v_bar, j, n, h)
                               : d1(w.flux, j, n, h);
        const double x = candidate.x(j);
        const double drift = x * drift_d1(w.rho_c, j, n, h, s_dot, x, prob.advection);

        r[j] = (w.rho_c[j] - w.rho_q[j]) / prob.dt - kappa / (s * s) * lap + adv / s -
               s_dot / s * drift;
        if (prob.source) r[j] -= prob.source(t_new, x);
    }
    return r;
}

void assemble_diffusion_jacobian(BandedMatrix& jac, const GridFunction& c,
                                 const GridFunction& v_bar, double s, double s_dot,
                                 const DiffusionProblem& prob) {
    const int n = static_cast<int>(c.cells());
    const double h = c.h();
    const double kappa = prob.constants.kappa;
    jac.zero();

    std::vector<double> rp(n + 1);
    for (int j = 0; j <= n; ++j) rp[j] = prob.rho.rho_prime(c[j]);

    for (int j = 0; j <= n; ++j) {
        jac.add(j, j, rp[j] / prob.dt);

        // diffusion rows
        const double dcoef = kappa / (s * s);
        if (j == 0) {
            jac.add(0, 0, 2.0 * dcoef / (h * h));
            jac.add(0, 1, -2.0 * dcoef / (h * h));
        } else if (j == n) {
            jac.add(n, n, 2.0 * dcoef / (h * h));
            jac.add(n, n - 1, -2.0 * dcoef / (h * h));
        } else {
            jac.add(j, j - 1, -dcoef / (h * h));
            jac.add(j, j, 2.0 * dcoef / (h * h));
            jac.add(j, j + 1, -dcoef / (h * h));
        }

        // advection (1/s) d1(v_bar rho)
        if (prob.advection == AdvectionScheme::upwind) {
            auto dedge = [&](int cc, int wrt) {  // d(edge flux cc)/d(c_wrt)
                const double ve = 0.5 * (v_bar[cc] + v_bar[cc + 1]);
                const int up = (ve >= 0.0) ? cc : cc + 1;
                return (wrt == up) ? ve * rp[wrt] : 0.0;
            };
            if (j == 0) {
                jac.add(0, 0, (dedge(0, 0) - v_bar[0] * rp[0]) / (0.5 * h * s));
                jac.add(0, 1, dedge(0, 1) / (0.5 * h * s));
            } else if (j == n) {
                jac.add(n, n, (v_bar[n] * rp[n] - dedge(n - 1, n)) / (0.5 * h * s));
                jac.add(n, n - 1, -dedge(n - 1, n - 1) / (0.5 * h * s));
            } else {
                jac.add(j, j, (dedge(j, j) - dedge(j - 1, j)) / (h * s));
                jac.add(j, j + 1, dedge(j, j + 1) / (h * s));
                jac.add(j, j - 1, -dedge(j - 1, j - 1) / (h * s));
            }
        } else {
            if (j == 0) {
                jac.add(0, 1, v_bar[1] * rp[1] / (h * s));
                jac.add(0, 0, -v_bar[0] * rp[0] / (h * s));
            } else if (j == n) {
                jac.add(n, n, v_bar[n] * rp[n] / (h * s));
                jac.add(n, n - 1, -v_bar[n - 1] * rp[n - 1] / (h * s));
            } else {
                jac.add(j, j + 1, v_bar[j + 1] * rp[j + 1] / (2.0 * h * s));
                jac.add(j, j - 1, -v_bar[j - 1] * rp[j - 1] / (2.0 * h * s));
            }
        }

        // drift -(s'/s) x d1(rho)
        const double x = c.x(j);
        const double dc = -s_dot / s * x;
        if (j == 0) {
            // x = 0: no contribution
        } else if (j == n) {
            jac.add(n, n, dc * rp[n] / h);
            jac.add(n, n - 1, -dc * rp[n - 1] / h);
        } else if (prob.advection == AdvectionScheme::upwind && s_dot * x >= 0.0) {
            jac.add(j, j + 1, dc * rp[j + 1] / h);
            jac.add(j, j, -dc * rp[j] / h);
        } else if (prob.advection == AdvectionScheme::upwind) {
            jac.add(j, j, dc * rp[j] / h);
            jac.add(j, j - 1, -dc * rp[j - 1] / h);
        } else {
            jac.add(j, j + 1, dc * rp[j + 1] / (2.0 * h));
            jac.add(j, j - 1, -dc * rp[j - 1] / (2.0 * h));
        }
    }
}

PressureStepResult step_diffusion(const GridFunction& previous, double s, double s_dot,
                                  const GridFunction& v_bar, double t_new,
                                  const DiffusionProblem& prob) {
    if (!(s > 0.0)) throw SingularConfigurationError("diffusion: degenerate domain, s <= 0");
    const std::size_t n = previous.cells();

    // residual judged in pressure units: scale by the dominant diagonal
    const double h = previous.h();
    const double rscale = std::max({1.0, prob.rho.mu() / prob.dt,
                                    prob.constants.kappa / (s * s * h * h)});

    GridFunction c = previous;
    GridFunction r = diffusion_residual(c, previous, s, s_dot, v_bar, t_new, prob);
    double rnorm = max_abs(r);
    int iters = 0;

    BandedMatrix jac(static_cast<int>(n) + 1, 1, 1);
    while (rnorm > prob.newton_tol * rscale) {
        if (iters >= prob.newton_max_iter) {
            std::ostringstream os;
            os << "pore Newton stalled at residual " << rnorm << " after " << iters
               << " iterations";
            throw SolverError(os.str(), rnorm, iters);
        }
        assemble_diffusion_jacobian(jac, c, v_bar, s, s_dot, prob);
        jac.factor();
        std::vector<double> delta = r.values();
        jac.solve(delta);

        double lambda = 1.0;
        GridFunction trial = c;
        for (std::size_t j = 0; j <= n; ++j) trial[j] = c[j] - delta[j];
        GridFunction r_trial = diffusion_residual(trial, previous, s, s_dot, v_bar, t_new, prob);
        double rnorm_trial = max_abs(r_trial);
        int backtracks = 0;
        while (rnorm_trial > rnorm && backtracks < 8) {
            lambda *= 0.5;
            for (std::size_t j = 0; j <= n; ++j) trial[j] = c[j] - lambda * delta[j];
            r_trial = diffusion_residual(trial, previous, s, s_dot, v_bar, t_new, prob);
            rnorm_trial = max_abs(r_trial);
            ++backtracks;
        }
        c = std::move(trial);
        r = std::move(r_trial);
        rnorm = rnorm_trial;
        ++iters;
    }
    return PressureStepResult{std::move(c), iters, rnorm / rscale};
}

double liquid_mass(const GridFunction& p_bar, double s, const DensityLaw& rho,
                   double psi_hat_of_s) {
    GridFunction w(p_bar.cells());
    for (std::size_t j = 0; j < p_bar.nodes(); ++j) w[j] = rho.rho(p_bar[j]);
    return s * trapezoid(w) + psi_hat_of_s;
}

} // namespace foamswell
