#include "foamswell/galerkin_verifier.hpp"

#include "foamswell/banded.hpp"
#include "foamswell/errors.hpp"

#include <cmath>
#include <sstream>

namespace foamswell {

namespace {
constexpr double kGramTol = 1e-10;
}

double GalerkinBasis::generator(int j, double x, int deriv) const {
    if (j == 0) {
        if (deriv == 0) return x;
        if (deriv == 1) return 1.0;
        return 0.0;
    }
    const double w = (j - 0.5) * M_PI;
    switch (deriv) {
        case 0: return std::sin(w * x);
        case 1: return w * std::cos(w * x);
        default: return -w * w * std::sin(w * x);
    }
}

GalerkinBasis::GalerkinBasis(int n, int q) : n_(n), quad_(q) {
    if (n < 1) throw ValidationError("galerkin basis: need n >= 1");
    if (q < 2 * n) throw ValidationError("galerkin basis: need q >= 2n quadrature points");

    // generator values at quadrature nodes
    std::vector<std::vector<double>> g(n), gx(n), gxx(n);
    for (int i = 0; i < n; ++i) {
        g[i].resize(q);
        gx[i].resize(q);
        gxx[i].resize(q);
        for (int p = 0; p < q; ++p) {
            g[i][p] = generator(i, quad_.x[p], 0);
            gx[i][p] = generator(i, quad_.x[p], 1);
            gxx[i][p] = generator(i, quad_.x[p], 2);
        }
    }
    auto xdot = [&](const std::vector<double>& av, const std::vector<double>& avx,
                    const std::vector<double>& avxx, const std::vector<double>& bv,
                    const std::vector<double>& bvx, const std::vector<double>& bvxx) {
        double acc = 0.0;
        for (int p = 0; p < q; ++p)
            acc += quad_.w[p] * (av[p] * bv[p] + avx[p] * bvx[p] + avxx[p] * bvxx[p]);
        return acc;
    };

    // modified Gram-Schmidt on the values, tracking generator coefficients
    coeff_.assign(n, std::vector<double>(n, 0.0));
    z_.assign(n, std::vector<double>(q, 0.0));
    zx_.assign(n, std::vector<double>(q, 0.0));
    zxx_.assign(n, std::vector<double>(q, 0.0));
    for (int i = 0; i < n; ++i) {
        coeff_[i][i] = 1.0;
        z_[i] = g[i];
        zx_[i] = gx[i];
        zxx_[i] = gxx[i];
        for (int pass = 0; pass < 2; ++pass) {
            for (int r = 0; r < i; ++r) {
                const double proj = xdot(z_[i], zx_[i], zxx_[i], z_[r], zx_[r], zxx_[r]);
                for (int p = 0; p < q; ++p) {
                    z_[i][p] -= proj * z_[r][p];
                    zx_[i][p] -= proj * zx_[r][p];
                    zxx_[i][p] -= proj * zxx_[r][p];
                }
                for (int c = 0; c <= r; ++c) coeff_[i][c] -= proj * coeff_[r][c];
            }
        }
        const double nrm = std::sqrt(xdot(z_[i], zx_[i], zxx_[i], z_[i], zx_[i], zxx_[i]));
        if (!(nrm > 1e-8))
            throw ValidationError("galerkin basis: rank deficiency at mode " +
                                  std::to_string(i + 1));
        for (int p = 0; p < q; ++p) {
            z_[i][p] /= nrm;
            zx_[i][p] /= nrm;
            zxx_[i][p] /= nrm;
        }
        for (int c = 0; c <= i; ++c) coeff_[i][c] /= nrm;
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double gij = xdot(z_[i], zx_[i], zxx_[i], z_[j], zx_[j], zxx_[j]);
            const double target = (i == j) ? 1.0 : 0.0;
            if (std::abs(gij - target) > kGramTol)
                throw ValidationError("galerkin basis: Gram identity failed, |G - I| = " +
                                      std::to_string(std::abs(gij - target)));
        }

    z1_.resize(n);
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        for (int c = 0; c <= i; ++c) v += coeff_[i][c] * generator(c, 1.0, 0);
        z1_[i] = v;
    }
}

double GalerkinBasis::eval(const std::vector<double>& coeffs, double x, int deriv) const {
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) {
        if (coeffs[i] == 0.0) continue;
        double zi = 0.0;
        for (int c = 0; c <= i; ++c) zi += coeff_[i][c] * generator(c, x, deriv);
        acc += coeffs[i] * zi;
    }
    return acc;
}

GridFunction GalerkinBasis::reconstruct(const std::vector<double>& coeffs,
                                        std::size_t cells, int deriv) const {
    GridFunction out(cells);
    for (std::size_t j = 0; j <= cells; ++j)
        out[j] = eval(coeffs, static_cast<double>(j) / cells, deriv);
    return out;
}

std::vector<double> GalerkinBasis::project(const SmoothFunction& u) const {
    std::vector<double> a(n_, 0.0);
    const int q = static_cast<int>(quad_.x.size());
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int p = 0; p < q; ++p) {
            const double x = quad_.x[p];
            acc += quad_.w[p] *
                   (u.f(x) * z_[i][p] + u.fx(x) * zx_[i][p] + u.fxx(x) * zxx_[i][p]);
        }
        a[i] = acc;
    }
    return a;
}

namespace {

struct Assembler {
    const GalerkinBasis& basis;
    const GalerkinProblem& prob;
    int n, q;
    std::vector<double> mass;    // m (z_i, z_j)_H, row-major
    std::vector<double> stiff;   // gamma (z_i'', z_j'')_H
    std::vector<double> visc;    // k_v (z_i', z_j')_H

    Assembler(const GalerkinBasis& b, const GalerkinProblem& p)
        : basis(b), prob(p), n(b.modes()), q(static_cast<int>(b.quad().x.size())),
          mass(n * n, 0.0), stiff(n * n, 0.0), visc(n * n, 0.0) {
        const auto& w = b.quad().w;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double mm = 0.0, kk = 0.0, vv = 0.0;
                for (int p = 0; p < q; ++p) {
                    mm += w[p] * b.z()[i][p] * b.z()[j][p];
                    kk += w[p] * b.zxx()[i][p] * b.zxx()[j][p];
                    vv += w[p] * b.zx()[i][p] * b.zx()[j][p];
                }
                mass[i * n + j] = prob.constants.m * mm;
                stiff[i * n + j] = prob.constants.gamma * kk;
                visc[i * n + j] = prob.constants.k_v * vv;
            }
    }

    // gradient of the expansion at every quadrature point; throws on loss of
    // positivity
    std::vector<double> gradients(const std::vector<double>& a) const {
        std::vector<double> ux(q, 0.0);
        for (int i = 0; i < n; ++i)
            for (int p = 0; p < q; ++p) ux[p] += a[i] * basis.zx()[i][p];
        for (int p = 0; p < q; ++p)
            if (!(ux[p] > 0.0))
                throw SingularConfigurationError(
                    "galerkin: gradient positivity lost at a quadrature point");
        return ux;
    }

    bool positive(const std::vector<double>& a) const {
        std::vector<double> ux(q, 0.0);
        for (int i = 0; i < n; ++i)
            for (int p = 0; p < q; ++p) ux[p] += a[i] * basis.zx()[i][p];
        for (int p = 0; p < q; ++p)
            if (!(ux[p] > 0.0)) return false;
        return true;
    }

    double boundary_value(const std::vector<double>& a) const {
        double u1 = 0.0;
        for (int i = 0; i < n; ++i) u1 += a[i] * basis.z_at_one(i);
        return u1;
    }

    // residual R_j(a, adot, addot) at time t
    std::vector<double> residual(const std::vector<double>& a, const std::vector<double>& adot,
                                 const std::vector<double>& addot, double t) const {
        const auto& w = basis.quad().w;
        const auto& x = basis.quad().x;
        std::vector<double> r(n, 0.0);
        const std::vector<double> ux = gradients(a);
        const double u1 = boundary_value(a);
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += mass[j * n + i] * addot[i] + stiff[j * n + i] * a[i] +
                       visc[j * n + i] * adot[i];
            double nl = 0.0;
            for (int p = 0; p < q; ++p) {
                double term = elastic_response(ux[p], prob.constants.k);
                if (prob.pressure_term) term += prob.pressure_term(t, x[p]);
                nl += w[p] * term * basis.zx()[j][p];
            }
            acc += nl + prob.phi(u1) * basis.z_at_one(j);
            if (prob.boundary_forcing) acc -= prob.boundary_forcing(t) * basis.z_at_one(j);
            r[j] = acc;
        }
        return r;
    }

    // Jacobian w.r.t. a with the Newmark rates addot = c_a * a + ..., adot = c_v * a + ...
    void jacobian(BandedMatrix& jac, const std::vector<double>& a, double c_a,
                  double c_v) const {
        const auto& w = basis.quad().w;
        const std::vector<double> ux = gradients(a);
        std::vector<double> fp(q);
        for (int p = 0; p < q; ++p)
            fp[p] = elastic_response_derivative(ux[p], prob.constants.k);
        const double u1 = boundary_value(a);
        const double dphi = prob.phi.derivative(u1);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double v = c_a * mass[j * n + i] + stiff[j * n + i] + c_v * visc[j * n + i];
                double nl = 0.0;
                for (int p = 0; p < q; ++p)
                    nl += w[p] * fp[p] * basis.zx()[i][p] * basis.zx()[j][p];
                v += nl + dphi * basis.z_at_one(i) * basis.z_at_one(j);
                jac.at(j, i) = v;
            }
    }
};

double linf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

GalerkinTrajectory integrate_galerkin(const GalerkinBasis& basis, const SmoothFunction& u0,
                                      const SmoothFunction& v0, double t_final,
                                      const GalerkinProblem& prob) {
    const int n = basis.modes();
    Assembler as(basis, prob);

    std::vector<double> a = basis.project(u0);
    std::vector<double> adot = basis.project(v0);
    if (!as.positive(a))
        throw SingularConfigurationError(
            "galerkin: projected initial gradient not positive at quadrature points");

    // initial acceleration from M addot = -rest
    std::vector<double> addot(n, 0.0);
    {
        std::vector<double> r = as.residual(a, adot, addot, 0.0);
        BandedMatrix m(n, n - 1 > 0 ? n - 1 : 0, n - 1 > 0 ? n - 1 : 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = as.mass[i * n + j];
        m.factor();
        m.solve(r);
        for (int i = 0; i < n; ++i) addot[i] = -r[i];
    }

    GalerkinTrajectory traj;
    traj.times.push_back(0.0);
    traj.coeffs.push_back(a);
    traj.coeff_rates.push_back(adot);
    traj.residual_norms.push_back(0.0);

    const double dt = prob.dt;
    // residual in coefficient units: scale out the dominant diagonal
    double diag_max = 1.0;
    for (int i = 0; i < n; ++i)
        diag_max = std::max({diag_max, 4.0 / (dt * dt) * as.mass[i * n + i],
                             as.stiff[i * n + i]});
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
    BandedMatrix jac(n, n - 1 > 0 ? n - 1 : 0, n - 1 > 0 ? n - 1 : 0);

    for (std::size_t step = 1; step <= n_steps; ++step) {
        const double t_new = static_cast<double>(step) * dt;
        const double ca = 4.0 / (dt * dt);
        const double cv = 2.0 / dt;
        // Newmark closures in terms of the new coefficients
        auto rates = [&](const std::vector<double>& anew, std::vector<double>& vn,
                         std::vector<double>& an) {
            for (int i = 0; i < n; ++i) {
                an[i] = ca * (anew[i] - a[i] - dt * adot[i]) - addot[i];
                vn[i] = cv * (anew[i] - a[i]) - adot[i];
            }
        };

        std::vector<double> anew = a;
        for (int i = 0; i < n; ++i) anew[i] += dt * adot[i];
        if (!as.positive(anew)) anew = a;
        std::vector<double> vn(n), an(n);
        rates(anew, vn, an);
        std::vector<double> r = as.residual(anew, vn, an, t_new);
        double rnorm = linf(r);
        int iters = 0;
        while (rnorm > prob.newton_tol * diag_max) {
            if (iters >= prob.newton_max_iter)
                throw SolverError("galerkin Newton stalled", rnorm, iters);
            as.jacobian(jac, anew, ca, cv);
            jac.factor();
            std::vector<double> delta = r;
            jac.solve(delta);

            double lambda = 1.0;
            std::vector<double> trial(n);
            auto apply = [&](double lam) {
                for (int i = 0; i < n; ++i) trial[i] = anew[i] - lam * delta[i];
            };
            apply(lambda);
            int halvings = 0;
            while (!as.positive(trial)) {
                if (++halvings > 60)
                    throw SingularConfigurationError(
                        "galerkin: line search cannot maintain gradient positivity");
                lambda *= 0.5;
                apply(lambda);
            }
            std::vector<double> vt(n), at(n);
            rates(trial, vt, at);
            std::vector<double> rt = as.residual(trial, vt, at, t_new);
            double rtn = linf(rt);
            int backtracks = 0;
            while (rtn > rnorm && backtracks < 8) {
                lambda *= 0.5;
                apply(lambda);
                rates(trial, vt, at);
                rt = as.residual(trial, vt, at, t_new);
                rtn = linf(rt);
                ++backtracks;
            }
            anew = trial;
            r = std::move(rt);
            rnorm = rtn;
            ++iters;
        }
        rates(anew, vn, an);
        a = anew;
        adot = vn;
        addot = an;
        traj.times.push_back(t_new);
        traj.coeffs.push_back(a);
        traj.coeff_rates.push_back(adot);
        traj.residual_norms.push_back(rnorm / diag_max);
    }
    return traj;
}

} // namespace foamswell
