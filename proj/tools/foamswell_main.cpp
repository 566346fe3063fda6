// foamswell: simulator for absorption-driven swelling of a rubber foam.
//
// Subcommands:
//   run <config>           time-march the coupled system, write CSV/JSON outputs
//   verify <suite>         run a verification suite (mms-beam | mms-pore |
//                          lemmas | galerkin-cross), write orders.csv
//   check-config <config>  validate a configuration without running
//
// Exit codes: 0 success, 2 config error, 3 solver failure, 4 invariant
// failure, 5 verification order violation.

#include "foamswell/diagnostics.hpp"
#include "foamswell/errors.hpp"
#include "foamswell/report_io.hpp"
#include "foamswell/sim_config.hpp"
#include "foamswell/verify_suites.hpp"
#include "foamswell/version.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace foamswell;

namespace {

std::string output_dir(const std::string& configured) {
    if (const char* env = std::getenv("FOAMSWELL_OUT"); env && *env) return env;
    return configured;
}

std::string hash_string(const SimConfig& cfg) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(cfg.hash()));
    return buf;
}

int cmd_run(const std::string& config_path) {
    SimConfig cfg;
    CoupledState initial;
    try {
        cfg = parse_config_file(config_path);
        initial = make_initial_state(cfg);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    const fs::path dir = output_dir(cfg.directory);
    fs::create_directories(dir / "snapshots");

    const BeamProblem beam_prob = make_beam_problem(cfg);
    const DiffusionProblem diff_prob = make_diffusion_problem(cfg);
    const CouplingConfig coupling = make_coupling_config(cfg);
    const MaterialSystem material = make_material(cfg);

    // per-step invariant tracking and snapshot writing
    CheckEntry worst_strain, worst_gn;
    bool first = true;
    int snapshot_counter = 0;
    auto observer = [&](const CoupledState& st, std::size_t step) {
        if (cfg.checks_enabled) {
            CheckEntry strain = check_strain_bound(st.beam, cfg.check_slack_factor);
            CheckEntry gn = check_gn_inequality(st.beam.v, true, cfg.check_slack_factor);
            if (first || strain.margin < worst_strain.margin) worst_strain = strain;
            if (first || gn.margin < worst_gn.margin) worst_gn = gn;
            first = false;
        }
        if (step % static_cast<std::size_t>(cfg.snapshot_stride) == 0) {
            char name[16];
            std::snprintf(name, sizeof(name), "%04d.csv", snapshot_counter++);
            write_snapshot_csv((dir / "snapshots" / name).string(), st);
        }
    };

    const auto t0 = std::chrono::steady_clock::now();
    RunReport report =
        run_simulation(initial, cfg.t_final, beam_prob, diff_prob, coupling, observer);

    InvariantReport checks;
    if (cfg.checks_enabled && !report.rows.empty()) {
        checks.push_back(worst_strain);
        checks.push_back(worst_gn);
        checks.push_back(check_energy_series(report, cfg.constants.k_v,
                                             cfg.check_slack_factor));
        // mass budget calibrated against a companion run at doubled dt
        if (report.completed) {
            SimConfig companion_cfg = cfg;
            companion_cfg.dt = 2.0 * cfg.dt;
            const RunReport companion = run_simulation(
                initial, cfg.t_final, make_beam_problem(companion_cfg),
                make_diffusion_problem(companion_cfg), coupling);
            checks.push_back(check_mass_series(report, material.h0,
                                               companion.completed ? &companion : nullptr,
                                               cfg.check_slack_factor));
        }
    }
    const auto t1 = std::chrono::steady_clock::now();

    write_timeseries_csv((dir / "timeseries.csv").string(), report);
    ReportMetadata meta;
    meta.config_hash = hash_string(cfg);
    meta.version = kVersion;
    meta.wall_time_seconds = std::chrono::duration<double>(t1 - t0).count();
    meta.completed = report.completed;
    meta.error = report.error;
    meta.relaxation_fallback = report.relaxation_fallback;
    write_report_json((dir / "report.json").string(), checks, meta);
    if (report.relaxation_fallback)
        std::cout << "note: Picard relaxation fell back to omega = 0.5 during the run\n";

    if (!report.completed) {
        std::cerr << "solver failure: " << report.error << "\n";
        return 3;
    }
    for (const auto& c : checks)
        std::cout << (c.passed ? "pass  " : "FAIL  ") << c.name << " (margin " << c.margin
                  << ")\n";
    if (!all_passed(checks)) return 4;
    std::cout << "run complete: " << report.rows.size() << " rows -> " << dir.string() << "\n";
    return 0;
}

int cmd_verify(const std::string& suite) {
    verify::SuiteResult result;
    try {
        result = verify::run_suite(suite);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    const fs::path dir = output_dir(".");
    fs::create_directories(dir);
    write_orders_csv((dir / "orders.csv").string(), result.rows);
    std::cout << "suite " << result.name << ":\n";
    for (const auto& line : result.lines) std::cout << line << "\n";
    std::cout << (result.passed ? "PASS" : "FAIL") << "\n";
    return result.passed ? 0 : 5;
}

int cmd_check_config(const std::string& config_path) {
    try {
        const SimConfig cfg = parse_config_file(config_path);
        make_initial_state(cfg);  // full hypothesis + compatibility validation
        const AssumptionConstants c = validate_assumptions(make_material(cfg));
        std::cout << "config ok (hash " << hash_string(cfg) << ")\n";
        std::cout << "  mu = " << c.mu << ", C_rho = " << c.c_rho << ", C_phi = " << c.c_phi
                  << ", C_psi = " << c.c_psi << ", C_nu = " << c.c_nu << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled swelling simulator for a liquid-absorbing foam"};
    app.set_version_flag("--version", std::string("foamswell ") + kVersion);
    app.require_subcommand(1);

    std::string config_path, suite;
    auto* run = app.add_subcommand("run", "run a simulation from a config file");
    run->add_option("config", config_path, "path to config file")->required();
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd->add_option("suite", suite,
                           "mms-beam | mms-pore | lemmas | galerkin-cross")
        ->required();
    auto* check = app.add_subcommand("check-config", "validate a config file");
    check->add_option("config", config_path, "path to config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path);
    if (verify_cmd->parsed()) return cmd_verify(suite);
    return cmd_check_config(config_path);
}
