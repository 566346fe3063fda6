#ifndef FOAMSWELL_BEAM_SOLVER_HPP
#define FOAMSWELL_BEAM_SOLVER_HPP

#include "foamswell/constitutive.hpp"
#include "foamswell/deformation_map.hpp"
#include "foamswell/grid_function.hpp"

#include <functional>

namespace foamswell {

/// Implicit integration of the viscoelastic beam equation
///
///   m u_tt + gamma u_xxxx - (f(u_x) + k_v u_xt)_x - nu(p_hat)_x = 0
///
/// on (0,1) with u(t,0)=0, u_xx=0 at both ends and the natural condition
///   -gamma u_xxx(1) + f(u_x)(1) + k_v u_xt(1) + nu(p_hat)(1) + phi(s) = 0
/// at the free end, for a frozen macro pressure field p_hat.
///
/// Space: uniform grid, conservative centered fluxes, ghost reflection for
/// the hinged u_xx conditions, first-order one-sided u_xxx in the natural
/// boundary row. Time: Newmark average acceleration; u_xt comes from the
/// Newmark velocity update. Newton on the banded (kl=3, ku=2) Jacobian with
/// a line search that keeps every cell gradient above gradient_floor.
struct BeamProblem {
    PhysicalConstants constants;
    BoundedLipschitzLaw phi = BoundedLipschitzLaw::zero();
    BoundedLipschitzLaw nu = BoundedLipschitzLaw::zero();
    std::size_t cells = 128;
    double dt = 1e-3;
    /// Residual tolerance in displacement units: the max-norm residual is
    /// scaled by the dominant row diagonal max(4m/dt^2, gamma/h^4) before the
    /// convergence test (raw rows grow like 1/dt^2 and would hit round-off).
    double newton_tol = 1e-10;
    int newton_max_iter = 30;
    double gradient_floor = 1e-8;

    /// Optional manufactured forcing: interior source density and natural-
    /// boundary source, both evaluated at the new time level. Mirrors the
    /// auxiliary forcing pair (g, q) the analysis works with; zero by default.
    std::function<double(double t, double x)> source;
    std::function<double(double t)> boundary_source;
};

struct BeamStepResult {
    DeformationSnapshot next;
    int newton_iters = 0;
    double residual_norm = 0.0;
};

/// Residual of the fully discrete scheme at a candidate displacement, given
/// the previous snapshot. Rows: [0] Dirichlet u(0)=0, [1..N-1] the PDE with
/// Newmark acceleration, [N] the natural boundary condition. t_new is the
/// time level of the candidate.
GridFunction beam_residual(const GridFunction& candidate,
                           const DeformationSnapshot& previous,
                           const GridFunction& p_hat, double t_new,
                           const BeamProblem& prob);

/// One implicit step. Throws SolverError when Newton stalls and
/// SingularConfigurationError when positivity cannot be maintained.
BeamStepResult step_beam(const DeformationSnapshot& previous,
                         const GridFunction& p_hat, double t_new,
                         const BeamProblem& prob);

class BandedMatrix;
/// Jacobian of beam_residual w.r.t. the candidate, banded (kl=3, ku=2).
void assemble_beam_jacobian(BandedMatrix& jac, const GridFunction& candidate,
                            const DeformationSnapshot& previous, const BeamProblem& prob);

/// Discrete energy
///   m/2 |v|^2 + gamma/2 |u_xx|^2 + k/4 (|u_x|^2 - |u_x|_{L1})
///   + k/8 int 1/u_x^2 + phi_hat(s),
/// trapezoid in the nodal terms and cell quadrature in the gradient terms.
double beam_energy(const DeformationSnapshot& snap, const BeamProblem& prob);

/// Residual of the natural boundary row alone at given (u, v) data; the
/// compatibility condition asks for this to vanish at t = 0.
double compatibility_residual(const GridFunction& u0, const GridFunction& v0,
                              const GridFunction& p_hat0, const BeamProblem& prob);

/// Solves for the coefficient beta in v0 = beta*x + delta*w(x) (the built-in
/// velocity family) so the discrete compatibility residual is exactly zero.
/// v0_rest holds delta*w(x) nodal values; returns beta.
double solve_compatibility_slope(const GridFunction& u0, const GridFunction& v0_rest,
                                 const GridFunction& p_hat0, const BeamProblem& prob);

/// Acceleration consistent with the spatial operator at (u, v, p_hat, t):
/// a_j = L_j / m on the interior, a(0) = 0, linear extrapolation in the last
/// node (the boundary row is algebraic, so that value never enters the
/// scheme).
GridFunction consistent_acceleration(const GridFunction& u, const GridFunction& v,
                                     const GridFunction& p_hat, double t,
                                     const BeamProblem& prob);

/// Bundles (u, v) with the consistent acceleration into a snapshot.
DeformationSnapshot make_snapshot(const GridFunction& u, const GridFunction& v,
                                  const GridFunction& p_hat, double t,
                                  const BeamProblem& prob);

} // namespace foamswell

#endif
