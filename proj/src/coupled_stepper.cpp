#include "foamswell/coupled_stepper.hpp"

#include "foamswell/diagnostics.hpp"
#include "foamswell/errors.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace foamswell {

CoupledState make_coupled_state(double t, DeformationSnapshot beam, GridFunction p_bar) {
    if (!beam.u.all_finite() || !beam.v.all_finite() || !p_bar.all_finite())
        throw SingularConfigurationError("coupled state: non-finite field values");
    if (!beam.monotone())
        throw SingularConfigurationError("coupled state: deformation not monotone");
    if (!(beam.s() > 0.0))
        throw SingularConfigurationError("coupled state: s <= 0");
    CoupledState st;
    st.t = t;
    st.p_hat = pull_back_pressure(p_bar, beam);
    st.v_bar = pull_back_velocity(beam, p_bar.cells());
    st.beam = std::move(beam);
    st.p_bar = std::move(p_bar);
    return st;
}

bool picard_should_relax(const std::vector<double>& changes, double omega) {
    const std::size_t k = changes.size();
    return k >= 2 && changes[k - 1] >= changes[k - 2] && omega > 0.5;
}

std::pair<CoupledState, PicardReport> coupled_step(const CoupledState& state,
                                                   const BeamProblem& beam_prob,
                                                   const DiffusionProblem& diff_prob,
                                                   const CouplingConfig& cfg) {
    const double t_new = state.t + beam_prob.dt;
    const bool one_way = beam_prob.nu.is_zero();
    double omega = cfg.relaxation;

    PicardReport report;
    GridFunction p_hat_guess = state.p_hat;
    GridFunction u_prev_iter = state.beam.u;
    GridFunction p_prev_iter = state.p_bar;
    DeformationSnapshot snap;
    GridFunction p_new;

    for (int k = 1; k <= cfg.picard_max_iter; ++k) {
        BeamStepResult beam_res = step_beam(state.beam, p_hat_guess, t_new, beam_prob);
        snap = std::move(beam_res.next);
        GridFunction v_bar = pull_back_velocity(snap, diff_prob.cells);
        PressureStepResult diff_res =
            step_diffusion(state.p_bar, snap.s(), snap.s_dot(), v_bar, t_new, diff_prob);
        p_new = std::move(diff_res.next);

        report.newton_iters_beam += beam_res.newton_iters;
        report.newton_iters_pore += diff_res.newton_iters;
        const double change = std::max(relative_max_change(snap.u, u_prev_iter),
                                       relative_max_change(p_new, p_prev_iter));
        report.changes.push_back(change);
        report.iterations = k;

        if (change < cfg.picard_tol || one_way) {
            CoupledState next;
            next.t = t_new;
            next.p_hat = pull_back_pressure(p_new, snap);  // exact cache, not the relaxed guess
            next.v_bar = std::move(v_bar);
            next.beam = std::move(snap);
            next.p_bar = std::move(p_new);
            return {std::move(next), std::move(report)};
        }

        if (picard_should_relax(report.changes, omega)) {
            omega = 0.5;  // contraction stalled, under-relax from here on
            report.relaxation_fallback = true;
        }
        GridFunction p_hat_new = pull_back_pressure(p_new, snap);
        for (std::size_t j = 0; j < p_hat_guess.nodes(); ++j)
            p_hat_guess[j] = omega * p_hat_new[j] + (1.0 - omega) * p_hat_guess[j];
        u_prev_iter = snap.u;
        p_prev_iter = p_new;
    }
    std::ostringstream os;
    os << "Picard coupling did not converge within " << cfg.picard_max_iter
       << " iterations; last changes:";
    const std::size_t first = report.changes.size() > 4 ? report.changes.size() - 4 : 0;
    for (std::size_t i = first; i < report.changes.size(); ++i) os << ' ' << report.changes[i];
    throw CouplingError(os.str(), report.changes);
}

namespace {

StepRecord record_state(const CoupledState& st, const BeamProblem& beam_prob,
                        const DiffusionProblem& diff_prob, const PicardReport* picard) {
    StepRecord row;
    row.t = st.t;
    row.s = st.beam.s();
    row.s_dot = st.beam.s_dot();
    row.mass = liquid_mass(st.p_bar, row.s, diff_prob.rho, diff_prob.psi.primitive(row.s));
    row.energy = beam_energy(st.beam, beam_prob);
    row.min_strain = st.beam.u.min_cell_gradient();
    row.strain_bound = strain_bound_estimate(st.beam).bound;
    if (picard) {
        row.picard_iters = picard->iterations;
        row.newton_iters_beam = picard->newton_iters_beam;
        row.newton_iters_pore = picard->newton_iters_pore;
    }
    return row;
}

void record_energy_budget(RunReport& rep, const CoupledState& st, const BeamProblem& prob) {
    const double diss = prob.constants.k_v *
                        cell_gradient_quadrature(st.beam.v, [](double g) { return g * g; });
    GridFunction nu_vals(st.p_hat.cells());
    for (std::size_t j = 0; j < st.p_hat.nodes(); ++j) nu_vals[j] = prob.nu(st.p_hat[j]);
    rep.dissipation.push_back(diss);
    rep.coupling_work.push_back(trapezoid_of_squares(nu_vals));
}

} // namespace

RunReport run_simulation(const CoupledState& initial, double t_final,
                         const BeamProblem& beam_prob, const DiffusionProblem& diff_prob,
                         const CouplingConfig& cfg) {
    return run_simulation(initial, t_final, beam_prob, diff_prob, cfg, StepObserver{});
}

RunReport run_simulation(const CoupledState& initial, double t_final,
                         const BeamProblem& beam_prob, const DiffusionProblem& diff_prob,
                         const CouplingConfig& cfg, const StepObserver& observer) {
    RunReport rep;
    rep.dt = beam_prob.dt;
    rep.beam_cells = beam_prob.cells;
    rep.pore_cells = diff_prob.cells;

    const auto n_steps =
        static_cast<std::size_t>(std::ceil(t_final / beam_prob.dt - 1e-9));
    CoupledState state = initial;
    rep.rows.push_back(record_state(state, beam_prob, diff_prob, nullptr));
    record_energy_budget(rep, state, beam_prob);
    if (observer) observer(state, 0);

    for (std::size_t step = 1; step <= n_steps; ++step) {
        try {
            auto [next, picard] = coupled_step(state, beam_prob, diff_prob, cfg);
            state = std::move(next);
            rep.relaxation_fallback |= picard.relaxation_fallback;
            rep.rows.push_back(record_state(state, beam_prob, diff_prob, &picard));
            record_energy_budget(rep, state, beam_prob);
            if (observer) observer(state, step);
        } catch (const std::exception& e) {
            rep.error = e.what();
            return rep;
        }
    }
    rep.completed = true;
    return rep;
}

} // namespace foamswell
