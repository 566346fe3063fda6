#include "foamswell/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace foamswell {

double quadrature_slack(double h, double scale) {
    return 10.0 * h * h * std::max(1.0, scale);
}

double strain_bound_formula(double r1, double r2) {
    return r2 / std::sqrt(2.0) * std::exp(-r1 * r2 * r2);
}

StrainBound strain_bound_estimate(const DeformationSnapshot& snap) {
    StrainBound out;
    out.r1 = cell_gradient_quadrature(snap.u, [](double g) { return 1.0 / (g * g); });
    out.r2 = discrete_x_norm(snap.u);
    out.bound = strain_bound_formula(out.r1, out.r2);
    return out;
}

CheckEntry check_strain_bound(const DeformationSnapshot& snap, double slack_factor) {
    const StrainBound sb = strain_bound_estimate(snap);
    const double h = snap.u.h();
    const double slack = slack_factor * h * h * std::max(1.0, sb.r2 * sb.r2);
    CheckEntry e;
    e.name = "strain_lower_bound";
    e.measured = snap.u.min_cell_gradient();
    e.bound = sb.bound - slack;
    e.margin = e.measured - e.bound;
    e.passed = e.margin >= 0.0 && e.measured > 0.0;
    return e;
}

CheckEntry check_gn_inequality(const GridFunction& z, bool vanishes_at_zero,
                               double slack_factor) {
    const double lhs = max_abs(z);
    const double znorm = l2_norm(z);
    const double zx = std::sqrt(cell_gradient_quadrature(z, [](double g) { return g * g; }));
    const double rhs = vanishes_at_zero
                           ? 2.0 * std::sqrt(zx) * std::sqrt(znorm)
                           : 2.0 * (std::sqrt(zx) * std::sqrt(znorm) + znorm);
    const double slack = slack_factor * z.h() * z.h() * std::max(1.0, zx + znorm);
    CheckEntry e;
    e.name = vanishes_at_zero ? "gagliardo_nirenberg_zero_trace" : "gagliardo_nirenberg";
    // oriented so margin >= 0 means the inequality holds
    e.measured = rhs + slack;
    e.bound = lhs;
    e.margin = e.measured - e.bound;
    e.passed = e.margin >= 0.0;
    return e;
}

CheckEntry check_mass_series(const RunReport& report, const BoundarySource& h0,
                             const RunReport* companion_double_dt, double slack_factor) {
    CheckEntry e;
    e.name = "mass_budget";
    if (report.rows.empty()) {
        e.passed = false;
        return e;
    }
    const double t0 = report.rows.front().t;
    const double mass0 = report.rows.front().mass;
    const double scale = std::max(1.0, std::abs(mass0));

    double worst = 0.0;
    for (const auto& row : report.rows) {
        const double expected = mass0 - h0.integral(t0, row.t);
        worst = std::max(worst, std::abs(row.mass - expected));
    }
    const double h = 1.0 / static_cast<double>(report.pore_cells);

    double allowance;
    if (companion_double_dt && !companion_double_dt->rows.empty()) {
        // calibrate the O(dt + h^2) constant from the double-dt companion
        double worst_c = 0.0;
        const double c_t0 = companion_double_dt->rows.front().t;
        const double c_m0 = companion_double_dt->rows.front().mass;
        for (const auto& row : companion_double_dt->rows) {
            const double expected = c_m0 - h0.integral(c_t0, row.t);
            worst_c = std::max(worst_c, std::abs(row.mass - expected));
        }
        const double denom = companion_double_dt->dt + h * h;
        const double c_cal = worst_c / denom;
        allowance = 3.0 * c_cal * (report.dt + h * h) + 1e-10 * scale;
    } else {
        allowance = slack_factor * (report.dt + h * h) * scale;
    }

    e.measured = allowance;
    e.bound = worst;
    e.margin = allowance - worst;
    e.passed = e.margin >= 0.0;
    return e;
}

CheckEntry check_energy_series(const RunReport& report, double k_v, double slack_factor) {
    CheckEntry e;
    e.name = "energy_estimate";
    if (report.rows.size() < 2 || report.dissipation.size() != report.rows.size()) {
        e.passed = false;
        return e;
    }
    const double e0 = report.rows.front().energy;
    double diss_acc = 0.0;
    double work_acc = 0.0;
    double worst = -1e300;
    double scale = std::max(1.0, std::abs(e0));
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        diss_acc += report.dt * report.dissipation[i];
        work_acc += report.dt * report.coupling_work[i];
        const double lhs = report.rows[i].energy + 0.5 * diss_acc;
        const double rhs = e0 + work_acc / (2.0 * k_v);
        worst = std::max(worst, lhs - rhs);
        scale = std::max(scale, std::abs(rhs));
    }
    const double h = 1.0 / static_cast<double>(report.beam_cells);
    const double slack = slack_factor * (report.dt + h * h) * scale;
    e.measured = slack;
    e.bound = worst;
    e.margin = slack - worst;
    e.passed = e.margin >= 0.0;
    return e;
}

CheckEntry check_energy_monotone(const RunReport& report, double rel_tol) {
    CheckEntry e;
    e.name = "energy_monotone";
    if (report.rows.empty()) {
        e.passed = false;
        return e;
    }
    const double tol = rel_tol * std::max(1.0, std::abs(report.rows.front().energy));
    double worst_rise = 0.0;
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        worst_rise = std::max(worst_rise, report.rows[i].energy - report.rows[i - 1].energy);
    e.measured = tol;
    e.bound = worst_rise;
    e.margin = tol - worst_rise;
    e.passed = e.margin >= 0.0;
    return e;
}

bool all_passed(const InvariantReport& report) {
    return std::all_of(report.begin(), report.end(),
                       [](const CheckEntry& e) { return e.passed; });
}

} // namespace foamswell
