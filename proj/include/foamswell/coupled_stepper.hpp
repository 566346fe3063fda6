#ifndef FOAMSWELL_COUPLED_STEPPER_HPP
#define FOAMSWELL_COUPLED_STEPPER_HPP

#include "foamswell/beam_solver.hpp"
#include "foamswell/deformation_map.hpp"
#include "foamswell/pore_diffusion.hpp"

#include <string>
#include <vector>

namespace foamswell {

/// Full system state at one time level, with the pullbacks cached: p_hat is
/// the pressure in material coordinates, v_bar the velocity in rescaled
/// liquid coordinates, both consistent with (beam, p_bar) to round-off.
struct CoupledState {
    double t = 0.0;
    DeformationSnapshot beam;
    GridFunction p_bar;
    GridFunction p_hat;
    GridFunction v_bar;
};

/// Builds the caches from (beam, p_bar) and checks the state invariants.
CoupledState make_coupled_state(double t, DeformationSnapshot beam, GridFunction p_bar);

struct CouplingConfig {
    double picard_tol = 1e-8;
    int picard_max_iter = 25;
    double relaxation = 1.0;   // omega in (0,1]
};

struct PicardReport {
    int iterations = 0;
    std::vector<double> changes;        // successive relative (u, p_bar) changes
    bool relaxation_fallback = false;   // omega dropped to 0.5 mid-iteration
    int newton_iters_beam = 0;
    int newton_iters_pore = 0;
};

/// One step of the alternating solve: beam with the current pressure guess,
/// pullbacks, pore pressure, new pressure guess under relaxation, repeated
/// until the (u, p_bar) pair stops moving. With a zero nu-law the pressure
/// never feeds back and a single pass is exact, reported as one iteration.
std::pair<CoupledState, PicardReport> coupled_step(const CoupledState& state,
                                                   const BeamProblem& beam_prob,
                                                   const DiffusionProblem& diff_prob,
                                                   const CouplingConfig& cfg);

/// Relaxation policy: drop omega to 0.5 once the change sequence stops
/// decreasing (and only once).
bool picard_should_relax(const std::vector<double>& changes, double omega);

struct StepRecord {
    double t = 0.0;
    double s = 0.0;
    double s_dot = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double min_strain = 0.0;
    double strain_bound = 0.0;
    int picard_iters = 0;
    int newton_iters_beam = 0;
    int newton_iters_pore = 0;
};

struct RunReport {
    std::vector<StepRecord> rows;
    bool completed = false;
    std::string error;
    double dt = 0.0;
    std::size_t beam_cells = 0;
    std::size_t pore_cells = 0;
    bool relaxation_fallback = false;
    // side series for the energy budget (not part of the CSV schema):
    // per recorded level, k_v |v_x|^2 and |nu(p_hat)|^2 by cell/trapezoid
    // quadrature
    std::vector<double> dissipation;
    std::vector<double> coupling_work;
};

/// Marches to T_final recording the per-step series. A failing step aborts
/// with the partial report and the error message; no exception escapes.
RunReport run_simulation(const CoupledState& initial, double t_final,
                         const BeamProblem& beam_prob, const DiffusionProblem& diff_prob,
                         const CouplingConfig& cfg);

/// Optional per-step observer variant (snapshot writers hook in here).
using StepObserver = std::function<void(const CoupledState&, std::size_t step_index)>;
RunReport run_simulation(const CoupledState& initial, double t_final,
                         const BeamProblem& beam_prob, const DiffusionProblem& diff_prob,
                         const CouplingConfig& cfg, const StepObserver& observer);

} // namespace foamswell

#endif
