#ifndef FOAMSWELL_SIM_CONFIG_HPP
#define FOAMSWELL_SIM_CONFIG_HPP

#include "foamswell/constitutive.hpp"
#include "foamswell/coupled_stepper.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace foamswell {

/// Parsed simulation configuration. See the README for the full key table;
/// parsing is strict, unknown keys are errors.
struct SimConfig {
    // [material]
    PhysicalConstants constants;
    struct RhoParams {
        std::string family = "tanh";  // linear | tanh
        double a = 1.0, b = 0.5, l = 1.0, w0 = 2.0;
    } rho;
    struct LawParams {
        double c = 0.0, l = 1.0, ref = 1.0;
    };
    LawParams nu{0.1, 1.0, 1.0};
    LawParams phi{0.05, 1.0, 1.0};
    LawParams psi{0.2, 1.0, 1.0};

    // [boundary]
    std::vector<std::pair<double, double>> h0_knots{{0.0, 0.0}};

    // [discretization]
    std::size_t n_beam = 128;
    std::size_t n_pore = 128;
    double dt = 1e-3;
    double t_final = 1.0;

    // [coupling]
    double tol = 1e-8;
    int max_iter = 25;
    double omega = 1.0;

    // [solver]
    double newton_tol = 1e-10;
    int newton_max_iter = 30;
    double gradient_floor = 1e-8;
    std::string advection = "central";

    // [initial]
    std::string u0_family = "sine";   // linear | sine: u0 = x + alpha sin(pi x)
    double u0_alpha = 0.05;
    std::string p0_family = "cosine"; // constant | cosine: p0 = value + amp cos(pi x)
    double p0_value = 1.0;
    double p0_amplitude = 0.2;
    double v0_beta = 0.0;             // v0 = beta x + delta sin^2(pi x)
    double v0_delta = 0.0;
    bool auto_compatibility = true;

    // [output]
    std::string directory = "out";
    int snapshot_stride = 100;

    // [checks]
    bool checks_enabled = true;
    double check_slack_factor = 10.0;

    /// Canonical serialization (fixed key order); the config hash is FNV-1a
    /// over this text, so it is stable across runs and platforms.
    std::string canonical() const;
    std::uint64_t hash() const;
};

/// Strict parse; throws ConfigError with a line number on syntax errors and
/// with the field path on semantic violations.
SimConfig parse_config(const std::string& text);
SimConfig parse_config_file(const std::string& path);

/// Cross-field validation; parse_config already calls it.
void validate_config(const SimConfig& cfg);

MaterialSystem make_material(const SimConfig& cfg);
BeamProblem make_beam_problem(const SimConfig& cfg);
DiffusionProblem make_diffusion_problem(const SimConfig& cfg);
CouplingConfig make_coupling_config(const SimConfig& cfg);

/// Builds the initial coupled state, enforcing every hypothesis the
/// well-posedness theory needs: u0x > 0, hinged ends for the u0 family, and
/// the compatibility identity at the free end (solved for v0's slope when
/// auto_compatibility is on, demanded to 1e-8 otherwise). Rejects before any
/// time step with ConfigError.
CoupledState make_initial_state(const SimConfig& cfg);

} // namespace foamswell

#endif
