#ifndef FOAMSWELL_CONSTITUTIVE_HPP
#define FOAMSWELL_CONSTITUTIVE_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace foamswell {

/// The five positive physical constants of the model.
struct PhysicalConstants {
    double m = 1.0;       // foam density
    double gamma = 0.01;  // fourth-order stiffness
    double k = 1.0;       // elastic constant
    double k_v = 0.5;     // viscous constant
    double kappa = 1.0;   // permeability

    void require_valid() const;  // throws ValidationError unless all > 0
};

/// Singular elastic response (k/2)(g - 1/2 - 1/(2 g^3)). Blows up to -inf as
/// the gradient g -> 0+, which is what keeps the deformation injective.
double elastic_response(double g, double k);
double elastic_response_derivative(double g, double k);
/// Primitive with f_hat' = elastic_response: (k/4)(g^2 - g) + k/(8 g^2).
double elastic_response_primitive(double g, double k);

/// Liquid density law rho(p) = a*p + b*tanh(p/l) + w0 and its inverse beta.
/// The tanh augmentation keeps closed forms for every certified constant:
/// rho' in [a, a + b/l], so mu = a.
class DensityLaw {
public:
    DensityLaw(double a, double b, double l, double w0);
    static DensityLaw linear(double a = 1.0, double w0 = 0.0);

    double rho(double p) const;
    double rho_prime(double p) const;
    double beta(double w) const;        // Newton inversion of rho
    double beta_prime(double w) const;  // 1 / rho'(beta(w))

    double mu() const { return a_; }                    // inf rho'
    double sup_rho_prime() const { return a_ + (l_ > 0.0 ? b_ / l_ : 0.0); }
    /// |rho'|_inf + |beta'|_{W^{1,inf}} with the closed-form Lipschitz bound
    /// for beta'.
    double c_rho() const;

    bool is_linear() const { return b_ == 0.0; }
    double a() const { return a_; }
    double b() const { return b_; }
    double l() const { return l_; }
    double w0() const { return w0_; }

private:
    double a_, b_, l_, w0_;
};

/// Bounded Lipschitz law c * tanh((r - r0)/l), used for nu, phi and psi.
/// Primitive c*l*log(cosh((r - r0)/l)) is available in closed form.
class BoundedLipschitzLaw {
public:
    BoundedLipschitzLaw(double amplitude, double scale, double shift);
    static BoundedLipschitzLaw zero();

    double operator()(double r) const;
    double derivative(double r) const;
    double primitive(double r) const;   // vanishes at r = shift

    double bound() const { return std::abs(c_); }               // |law|_inf
    double lipschitz() const { return std::abs(c_) / l_; }      // |law'|_inf
    double w1inf() const { return bound() + lipschitz(); }
    bool is_zero() const { return c_ == 0.0; }

    double amplitude() const { return c_; }
    double scale() const { return l_; }
    double shift() const { return r0_; }

private:
    double c_, l_, r0_;
};

/// Boundary pressure-flux source h0: a clamped piecewise-linear time table.
class BoundarySource {
public:
    BoundarySource() : knots_{{0.0, 0.0}} {}
    explicit BoundarySource(double constant) : knots_{{0.0, constant}} {}
    explicit BoundarySource(std::vector<std::pair<double, double>> knots);

    double operator()(double t) const;
    /// Exact integral over [t0, t1] of the piecewise-linear table.
    double integral(double t0, double t1) const;
    /// Total variation sum |h_{i+1} - h_i| (the W^{1,1} seminorm of the table).
    double w11_seminorm() const;
    bool is_zero() const;

    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;
    double integral_from_start(double t) const;
};

/// Everything constitutive in one immutable bundle; safe to share across
/// concurrent simulations.
struct MaterialSystem {
    PhysicalConstants constants;
    DensityLaw rho = DensityLaw::linear();
    BoundedLipschitzLaw nu = BoundedLipschitzLaw::zero();
    BoundedLipschitzLaw phi = BoundedLipschitzLaw::zero();
    BoundedLipschitzLaw psi = BoundedLipschitzLaw::zero();
    BoundarySource h0;
};

/// Constants the chosen law families certify in closed form.
struct AssumptionConstants {
    double mu = 0.0;
    double c_rho = 0.0;
    double c_phi = 0.0;
    double c_psi = 0.0;
    double c_nu = 0.0;
};

struct ValidationOptions {
    double range_lo = -50.0;
    double range_hi = 50.0;
    int samples = 10000;
    /// When set, sampling verifies these claimed constants instead of the
    /// closed-form ones (lets tests exercise the failure path).
    const AssumptionConstants* claimed = nullptr;
};

/// Returns the analytic constants and asserts by dense sampling that the
/// bounds they certify hold pointwise. Throws ValidationError naming the
/// violated assumption otherwise.
AssumptionConstants validate_assumptions(const MaterialSystem& system,
                                         const ValidationOptions& opts = {});

} // namespace foamswell

#endif
