#include "foamswell/constitutive.hpp"

#include "foamswell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace foamswell {

void PhysicalConstants::require_valid() const {
    auto check = [](double v, const char* name) {
        if (!(v > 0.0)) {
            std::ostringstream os;
            os << "physical constant " << name << " must be > 0, got " << v;
            throw ValidationError(os.str());
        }
    };
    check(m, "m");
    check(gamma, "gamma");
    check(k, "k");
    check(k_v, "k_v");
    check(kappa, "kappa");
}

double elastic_response(double g, double k) {
    if (!(g > 0.0)) throw std::domain_error("elastic_response: gradient must be > 0");
    return 0.5 * k * (g - 0.5 - 0.5 / (g * g * g));
}

double elastic_response_derivative(double g, double k) {
    if (!(g > 0.0)) throw std::domain_error("elastic_response_derivative: gradient must be > 0");
    const double g4 = g * g * g * g;
    return 0.5 * k * (1.0 + 1.5 / g4);
}

double elastic_response_primitive(double g, double k) {
    if (!(g > 0.0)) throw std::domain_error("elastic_response_primitive: gradient must be > 0");
    return 0.25 * k * (g * g - g) + 0.125 * k / (g * g);
}

// ---------------------------------------------------------------------------
// DensityLaw
// ---------------------------------------------------------------------------

DensityLaw::DensityLaw(double a, double b, double l, double w0)
    : a_(a), b_(b), l_(l), w0_(w0) {
    if (!(a > 0.0)) throw ValidationError("DensityLaw: slope a must be > 0 (mu must stay positive)");
    if (b < 0.0) throw ValidationError("DensityLaw: tanh amplitude b must be >= 0");
    if (b > 0.0 && !(l > 0.0)) throw ValidationError("DensityLaw: scale l must be > 0");
}

DensityLaw DensityLaw::linear(double a, double w0) { return DensityLaw(a, 0.0, 1.0, w0); }

double DensityLaw::rho(double p) const {
    return a_ * p + (b_ != 0.0 ? b_ * std::tanh(p / l_) : 0.0) + w0_;
}

double DensityLaw::rho_prime(double p) const {
    if (b_ == 0.0) return a_;
    const double c = std::cosh(p / l_);
    return a_ + b_ / (l_ * c * c);
}

double DensityLaw::beta(double w) const {
    // Monotone with rho' >= a, so plain Newton from the linear inverse is safe.
    double p = (w - w0_) / a_;
    for (int it = 0; it < 100; ++it) {
        const double r = rho(p) - w;
        if (std::abs(r) < 1e-14 * (1.0 + std::abs(w))) break;
        p -= r / rho_prime(p);
    }
    return p;
}

double DensityLaw::beta_prime(double w) const { return 1.0 / rho_prime(beta(w)); }

double DensityLaw::c_rho() const {
    // |rho'|_inf = a + b/l.  |beta'|_inf = 1/a.  Lip(beta') <= |rho''|_inf/mu^3
    // with |rho''|_inf = (2 b / l^2) * max|sech^2 tanh| = (2b/l^2)(2/(3 sqrt 3)).
    const double sup_rp = sup_rho_prime();
    const double sup_bp = 1.0 / a_;
    const double sup_rpp = (b_ == 0.0) ? 0.0 : (4.0 * b_) / (3.0 * std::sqrt(3.0) * l_ * l_);
    const double lip_bp = sup_rpp / (a_ * a_ * a_);
    return sup_rp + sup_bp + lip_bp;
}

// ---------------------------------------------------------------------------
// BoundedLipschitzLaw
// ---------------------------------------------------------------------------

BoundedLipschitzLaw::BoundedLipschitzLaw(double amplitude, double scale, double shift)
    : c_(amplitude), l_(scale), r0_(shift) {
    if (!(l_ > 0.0)) throw ValidationError("BoundedLipschitzLaw: scale must be > 0");
}

BoundedLipschitzLaw BoundedLipschitzLaw::zero() { return BoundedLipschitzLaw(0.0, 1.0, 0.0); }

double BoundedLipschitzLaw::operator()(double r) const {
    return c_ == 0.0 ? 0.0 : c_ * std::tanh((r - r0_) / l_);
}

double BoundedLipschitzLaw::derivative(double r) const {
    if (c_ == 0.0) return 0.0;
    const double ch = std::cosh((r - r0_) / l_);
    return c_ / (l_ * ch * ch);
}

double BoundedLipschitzLaw::primitive(double r) const {
    if (c_ == 0.0) return 0.0;
    // log(cosh(x)) computed as |x| + log1p(exp(-2|x|)) - log 2 to avoid overflow
    const double xarg = (r - r0_) / l_;
    const double ax = std::abs(xarg);
    const double logcosh = ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
    return c_ * l_ * logcosh;
}

// ---------------------------------------------------------------------------
// BoundarySource
// ---------------------------------------------------------------------------

BoundarySource::BoundarySource(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
    if (knots_.empty()) throw ValidationError("BoundarySource: empty table");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i].first > knots_[i - 1].first))
            throw ValidationError("BoundarySource: knots must be strictly increasing in t");
}

double BoundarySource::operator()(double t) const {
    if (t <= knots_.front().first) return knots_.front().second;
    if (t >= knots_.back().first) return knots_.back().second;
    std::size_t i = 1;
    while (knots_[i].first < t) ++i;
    const auto& [t0, v0] = knots_[i - 1];
    const auto& [t1, v1] = knots_[i];
    const double theta = (t - t0) / (t1 - t0);
    return (1.0 - theta) * v0 + theta * v1;
}

double BoundarySource::integral_from_start(double t) const {
    // integral of the clamped table from knots_.front().first to t (t >= start)
    double acc = 0.0;
    const double tstart = knots_.front().first;
    if (t <= tstart) return (t - tstart) * knots_.front().second;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const auto& [t0, v0] = knots_[i - 1];
        const auto& [t1, v1] = knots_[i];
        if (t <= t0) break;
        const double tb = std::min(t, t1);
        const double vb = (*this)(tb);
        acc += 0.5 * (v0 + vb) * (tb - t0);
    }
    if (t > knots_.back().first) acc += (t - knots_.back().first) * knots_.back().second;
    return acc;
}

double BoundarySource::integral(double t0, double t1) const {
    const double start = knots_.front().first;
    auto from_start = [&](double t) {
        if (t < start) return (t - start) * knots_.front().second;
        return integral_from_start(t);
    };
    return from_start(t1) - from_start(t0);
}

double BoundarySource::w11_seminorm() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        acc += std::abs(knots_[i].second - knots_[i - 1].second);
    return acc;
}

bool BoundarySource::is_zero() const {
    return std::all_of(knots_.begin(), knots_.end(),
                       [](const auto& kv) { return kv.second == 0.0; });
}

// ---------------------------------------------------------------------------
// validate_assumptions
// ---------------------------------------------------------------------------

namespace {

void fail(const char* which, const std::string& detail) {
    throw ValidationError(std::string(which) + " assumption violated: " + detail);
}

} // namespace

AssumptionConstants validate_assumptions(const MaterialSystem& system,
                                         const ValidationOptions& opts) {
    system.constants.require_valid();

    AssumptionConstants derived;
    derived.mu = system.rho.mu();
    derived.c_rho = system.rho.c_rho();
    derived.c_phi = system.phi.w1inf();
    derived.c_psi = system.psi.w1inf();
    derived.c_nu = system.nu.w1inf();
    const AssumptionConstants& c = opts.claimed ? *opts.claimed : derived;

    if (!(c.mu > 0.0)) fail("density law", "mu must be strictly positive");

    const int n = opts.samples;
    const double lo = opts.range_lo, hi = opts.range_hi;
    const double tol = 1e-12;
    for (int i = 0; i <= n; ++i) {
        const double r = lo + (hi - lo) * i / n;

        const double rp = system.rho.rho_prime(r);
        if (rp < c.mu - tol)
            fail("density law", "sampled rho' below mu at r=" + std::to_string(r));
        if (rp > c.c_rho + tol)
            fail("density law", "sampled rho' above C_rho at r=" + std::to_string(r));

        // beta o rho = identity
        const double round_trip = system.rho.beta(system.rho.rho(r));
        if (std::abs(round_trip - r) > 1e-10 * (1.0 + std::abs(r)))
            fail("density law", "beta(rho(r)) != r at r=" + std::to_string(r));

        auto check_law = [&](const BoundedLipschitzLaw& law, double w1inf, const char* tag,
                             const char* assumption) {
            if (std::abs(law(r)) > w1inf + tol)
                fail(assumption, std::string(tag) + " exceeds its W^{1,inf} bound");
            if (std::abs(law.derivative(r)) > w1inf + tol)
                fail(assumption, std::string(tag) + "' exceeds its W^{1,inf} bound");
        };
        check_law(system.phi, c.c_phi, "phi", "swelling-force law");
        check_law(system.psi, c.c_psi, "psi", "storage law");
        check_law(system.nu, c.c_nu, "nu", "pressure-stress law");
    }
    return derived;
}

} // namespace foamswell
