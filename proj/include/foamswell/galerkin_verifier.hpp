#ifndef FOAMSWELL_GALERKIN_VERIFIER_HPP
#define FOAMSWELL_GALERKIN_VERIFIER_HPP

#include "foamswell/constitutive.hpp"
#include "foamswell/grid_function.hpp"
#include "foamswell/quadrature.hpp"

#include <functional>
#include <vector>

namespace foamswell {

/// A smooth function with its first two derivatives, for projections and
/// frozen forcing fields.
struct SmoothFunction {
    std::function<double(double)> f;
    std::function<double(double)> fx;
    std::function<double(double)> fxx;
};

/// Spectral basis of the space X = {z in H^2(0,1) : z(0) = 0}, orthonormal in
/// the full H^2 inner product (z,w) + (z',w') + (z'',w'').
///
/// Generating family: x together with the quarter waves sin((i-1/2) pi x).
/// The linear generator matters: every quarter wave has zero slope at x = 1,
/// so alone they cannot represent a free end with nonzero strain.
class GalerkinBasis {
public:
    /// Gram-Schmidt over the generating family; requires q >= 2n quadrature
    /// points and verifies the Gram identity to 1e-10.
    GalerkinBasis(int n, int q);

    int modes() const { return n_; }
    const GaussLegendre& quad() const { return quad_; }

    /// Basis values at the quadrature nodes, [mode][point].
    const std::vector<std::vector<double>>& z() const { return z_; }
    const std::vector<std::vector<double>>& zx() const { return zx_; }
    const std::vector<std::vector<double>>& zxx() const { return zxx_; }
    double z_at_one(int i) const { return z1_[i]; }

    double eval(const std::vector<double>& coeffs, double x, int deriv = 0) const;
    GridFunction reconstruct(const std::vector<double>& coeffs, std::size_t cells,
                             int deriv = 0) const;

    /// X-orthogonal projection: coefficients (u, z_i)_X.
    std::vector<double> project(const SmoothFunction& u) const;

private:
    int n_;
    GaussLegendre quad_;
    std::vector<std::vector<double>> coeff_;  // z_i = sum_j coeff_[i][j] * generator_j
    std::vector<std::vector<double>> z_, zx_, zxx_;
    std::vector<double> z1_;

    double generator(int j, double x, int deriv) const;
};

/// The beam problem with frozen forcing, integrated in the span of the basis:
///   m(u_tt, z_j) + gamma(u_xx, z_jxx) + (f(u_x) + k_v u_tx, z_jx)
///     + (w(t,.), z_jx) + phi(u(1)) z_j(1) = q(t) z_j(1).
/// Same Newmark average acceleration and Newton contract as the grid solver,
/// which is the point: an independent discretization of the same dynamics.
struct GalerkinProblem {
    PhysicalConstants constants;
    BoundedLipschitzLaw phi = BoundedLipschitzLaw::zero();
    std::function<double(double t, double x)> pressure_term;  // w(t,x), may be null
    std::function<double(double t)> boundary_forcing;         // q(t), may be null
    double dt = 1e-3;
    double newton_tol = 1e-11;
    int newton_max_iter = 30;
};

struct GalerkinTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> coeffs;      // a(t) per stored level
    std::vector<std::vector<double>> coeff_rates; // da/dt per stored level
    std::vector<double> residual_norms;           // Newton exit residual per step
};

/// Integrates to t_final from the X-projections of (u0, v0). Throws
/// SingularConfigurationError if the reconstructed gradient loses positivity
/// at a quadrature point.
GalerkinTrajectory integrate_galerkin(const GalerkinBasis& basis, const SmoothFunction& u0,
                                      const SmoothFunction& v0, double t_final,
                                      const GalerkinProblem& prob);

} // namespace foamswell

#endif
