#ifndef FOAMSWELL_PORE_DIFFUSION_HPP
#define FOAMSWELL_PORE_DIFFUSION_HPP

#include "foamswell/constitutive.hpp"
#include "foamswell/grid_function.hpp"

#include <functional>

namespace foamswell {

enum class AdvectionScheme { central, upwind };

/// Implicit integration of the rescaled pore-pressure equation
///
///   rho(p)_t - (kappa/s^2) p_xx = -(1/s)(v_bar rho(p))_x + (s'/s) x rho(p)_x
///
/// on the fixed reference interval, with the Neumann data
///   p_x(0) = s h0(t)/kappa,   p_x(1) = -s s' psi(s)/kappa
/// folded into the boundary rows by ghost nodes. Backward Euler in time,
/// every spatial term at the new level.
///
/// The advection and drift first derivatives are centered inside and
/// one-sided on the two boundary rows; against trapezoid weights that pair
/// telescopes exactly, so with I[.] the trapezoid sum the discrete budget
///   s (I[rho^{n+1}] - I[rho^n])/dt + s' I[rho^{n+1}] + s' psi(s) = -h0
/// holds to solver tolerance and the only mass drift left is O(dt).
struct DiffusionProblem {
    PhysicalConstants constants;
    DensityLaw rho = DensityLaw::linear();
    BoundedLipschitzLaw psi = BoundedLipschitzLaw::zero();
    BoundarySource h0;
    std::size_t cells = 128;
    double dt = 1e-3;
    /// Tolerance in pressure units; the residual is scaled by its dominant
    /// diagonal max(mu/dt, kappa/(s h)^2) before the convergence test.
    double newton_tol = 1e-10;
    int newton_max_iter = 30;
    AdvectionScheme advection = AdvectionScheme::central;

    /// Optional manufactured source at the new time level.
    std::function<double(double t, double x)> source;
};

struct PressureStepResult {
    GridFunction next;
    int newton_iters = 0;
    double residual_norm = 0.0;
};

GridFunction diffusion_residual(const GridFunction& candidate, const GridFunction& previous,
                                double s, double s_dot, const GridFunction& v_bar,
                                double t_new, const DiffusionProblem& prob);

PressureStepResult step_diffusion(const GridFunction& previous, double s, double s_dot,
                                  const GridFunction& v_bar, double t_new,
                                  const DiffusionProblem& prob);

class BandedMatrix;
/// Tridiagonal Jacobian of diffusion_residual w.r.t. the candidate.
void assemble_diffusion_jacobian(BandedMatrix& jac, const GridFunction& candidate,
                                 const GridFunction& v_bar, double s, double s_dot,
                                 const DiffusionProblem& prob);

/// Total liquid mass s * int rho(p_bar) dx + psi_hat(s), trapezoid quadrature.
/// The s factor is the change of variables back to the physical domain.
double liquid_mass(const GridFunction& p_bar, double s, const DensityLaw& rho,
                   double psi_hat_of_s);

} // namespace foamswell

#endif
