#ifndef FOAMSWELL_DIAGNOSTICS_HPP
#define FOAMSWELL_DIAGNOSTICS_HPP

#include "foamswell/constitutive.hpp"
#include "foamswell/coupled_stepper.hpp"
#include "foamswell/deformation_map.hpp"
#include "foamswell/grid_function.hpp"

#include <string>
#include <vector>

namespace foamswell {

/// One runtime check. Orientation per check is fixed so that
/// margin >= 0 always means pass.
struct CheckEntry {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double bound = 0.0;
    double margin = 0.0;
};

using InvariantReport = std::vector<CheckEntry>;

/// Additive slack for checks that hold exactly only in the continuum:
/// 10 h^2 scaled by the size of the quantities involved.
double quadrature_slack(double h, double scale);

/// The strain lower bound (r2/sqrt 2) exp(-r1 r2^2) computed from
/// r1 = int 1/u_x^2 and r2 = |u|_{H^2}; any state with those values must keep
/// every gradient above it.
double strain_bound_formula(double r1, double r2);
struct StrainBound {
    double r1 = 0.0;
    double r2 = 0.0;
    double bound = 0.0;
};
StrainBound strain_bound_estimate(const DeformationSnapshot& snap);

/// min u_x >= bound - slack, with the bound from the state's own (r1, r2).
CheckEntry check_strain_bound(const DeformationSnapshot& snap, double slack_factor = 10.0);

/// Interpolation inequality |z|_inf <= 2 |z_x|^{1/2} |z|^{1/2} when z(0) = 0,
/// and |z|_inf <= 2(|z_x|^{1/2}|z|^{1/2} + |z|) otherwise, with O(h^2) slack.
CheckEntry check_gn_inequality(const GridFunction& z, bool vanishes_at_zero,
                               double slack_factor = 10.0);

/// Mass series of a run against the boundary influx budget: with h0 == 0 the
/// drift must shrink at the order of the scheme (calibrated by a companion
/// run at doubled dt), with h0 != 0 the drift must track -int h0.
CheckEntry check_mass_series(const RunReport& report, const BoundarySource& h0,
                             const RunReport* companion_double_dt = nullptr,
                             double slack_factor = 10.0);

/// Energy series against the a-priori estimate: E(t) + (k_v/2) sum dt |v_x|^2
/// bounded by E(0) + (1/(2 k_v)) sum dt |nu(p_hat)|^2 within order slack.
/// Uses the dissipation/coupling-work side series the run records.
CheckEntry check_energy_series(const RunReport& report, double k_v,
                               double slack_factor = 10.0);

/// Monotone nonincreasing energy for the free-decay configuration.
CheckEntry check_energy_monotone(const RunReport& report, double rel_tol = 1e-10);

bool all_passed(const InvariantReport& report);

} // namespace foamswell

#endif
