#include "foamswell/sim_config.hpp"

#include "foamswell/beam_solver.hpp"
#include "foamswell/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace foamswell {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": cannot parse number for '" +
                              key + "': " + v,
                          key);
    }
}

long parse_int(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": cannot parse integer for '" +
                              key + "': " + v,
                          key);
    }
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError("line " + std::to_string(line) + ": cannot parse boolean for '" + key +
                          "': " + v,
                      key);
}

std::vector<std::pair<double, double>> parse_table(const std::string& v,
                                                   const std::string& key, int line) {
    std::vector<std::pair<double, double>> knots;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("line " + std::to_string(line) +
                                  ": table entries must be t:value pairs",
                              key);
        knots.emplace_back(parse_double(trim(item.substr(0, colon)), key, line),
                           parse_double(trim(item.substr(colon + 1)), key, line));
    }
    if (knots.empty())
        throw ConfigError("line " + std::to_string(line) + ": empty table for '" + key + "'",
                          key);
    return knots;
}

void fmt(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

} // namespace

std::string SimConfig::canonical() const {
    std::ostringstream os;
    auto kv = [&](const char* key, double v) { os << key << "="; fmt(os, v); os << "\n"; };
    auto kvs = [&](const char* key, const std::string& v) { os << key << "=" << v << "\n"; };
    auto kvi = [&](const char* key, long v) { os << key << "=" << v << "\n"; };

    kv("material.m", constants.m);
    kv("material.gamma", constants.gamma);
    kv("material.k", constants.k);
    kv("material.k_v", constants.k_v);
    kv("material.kappa", constants.kappa);
    kvs("material.rho.family", rho.family);
    kv("material.rho.a", rho.a);
    kv("material.rho.b", rho.b);
    kv("material.rho.l", rho.l);
    kv("material.rho.w0", rho.w0);
    kv("material.nu.c", nu.c);
    kv("material.nu.l", nu.l);
    kv("material.nu.ref", nu.ref);
    kv("material.phi.c", phi.c);
    kv("material.phi.l", phi.l);
    kv("material.phi.ref", phi.ref);
    kv("material.psi.c", psi.c);
    kv("material.psi.l", psi.l);
    kv("material.psi.ref", psi.ref);
    os << "boundary.h0.table=";
    for (std::size_t i = 0; i < h0_knots.size(); ++i) {
        if (i) os << ",";
        fmt(os, h0_knots[i].first);
        os << ":";
        fmt(os, h0_knots[i].second);
    }
    os << "\n";
    kvi("discretization.n_beam", static_cast<long>(n_beam));
    kvi("discretization.n_pore", static_cast<long>(n_pore));
    kv("discretization.dt", dt);
    kv("discretization.t_final", t_final);
    kv("coupling.tol", tol);
    kvi("coupling.max_iter", max_iter);
    kv("coupling.omega", omega);
    kv("solver.newton_tol", newton_tol);
    kvi("solver.newton_max_iter", newton_max_iter);
    kv("solver.gradient_floor", gradient_floor);
    kvs("solver.advection", advection);
    kvs("initial.u0.family", u0_family);
    kv("initial.u0.alpha", u0_alpha);
    kvs("initial.p0.family", p0_family);
    kv("initial.p0.value", p0_value);
    kv("initial.p0.amplitude", p0_amplitude);
    kv("initial.v0.beta", v0_beta);
    kv("initial.v0.delta", v0_delta);
    kvs("initial.auto_compatibility", auto_compatibility ? "true" : "false");
    kvs("output.directory", directory);
    kvi("output.snapshot_stride", snapshot_stride);
    kvs("checks.enabled", checks_enabled ? "true" : "false");
    kv("checks.slack_factor", check_slack_factor);
    return os.str();
}

std::uint64_t SimConfig::hash() const {
    // FNV-1a 64
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

SimConfig parse_config(const std::string& text) {
    SimConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;

    // dispatch tables keep the parse strict: only these keys exist
    using Setter = std::function<void(const std::string&, int)>;
    std::map<std::string, Setter> keys;
    auto D = [&](const char* k, double* slot) {
        keys[k] = [slot, k](const std::string& v, int ln) { *slot = parse_double(v, k, ln); };
    };
    auto I = [&](const char* k, auto* slot) {
        keys[k] = [slot, k](const std::string& v, int ln) {
            const long x = parse_int(v, k, ln);
            if constexpr (std::is_unsigned_v<std::remove_pointer_t<decltype(slot)>>) {
                if (x < 0)
                    throw ConfigError("line " + std::to_string(ln) + ": '" + k +
                                          "' must be non-negative, got " + v,
                                      k);
            }
            *slot = static_cast<std::remove_pointer_t<decltype(slot)>>(x);
        };
    };
    auto B = [&](const char* k, bool* slot) {
        keys[k] = [slot, k](const std::string& v, int ln) { *slot = parse_bool(v, k, ln); };
    };
    auto S = [&](const char* k, std::string* slot) {
        keys[k] = [slot](const std::string& v, int) { *slot = v; };
    };

    D("material.m", &cfg.constants.m);
    D("material.gamma", &cfg.constants.gamma);
    D("material.k", &cfg.constants.k);
    D("material.k_v", &cfg.constants.k_v);
    D("material.kappa", &cfg.constants.kappa);
    S("material.rho.family", &cfg.rho.family);
    D("material.rho.a", &cfg.rho.a);
    D("material.rho.b", &cfg.rho.b);
    D("material.rho.l", &cfg.rho.l);
    D("material.rho.w0", &cfg.rho.w0);
    D("material.nu.c", &cfg.nu.c);
    D("material.nu.l", &cfg.nu.l);
    D("material.nu.ref", &cfg.nu.ref);
    D("material.phi.c", &cfg.phi.c);
    D("material.phi.l", &cfg.phi.l);
    D("material.phi.ref", &cfg.phi.ref);
    D("material.psi.c", &cfg.psi.c);
    D("material.psi.l", &cfg.psi.l);
    D("material.psi.ref", &cfg.psi.ref);
    keys["boundary.h0"] = [&cfg](const std::string& v, int ln) {
        cfg.h0_knots = {{0.0, parse_double(v, "boundary.h0", ln)}};
    };
    keys["boundary.h0.table"] = [&cfg](const std::string& v, int ln) {
        cfg.h0_knots = parse_table(v, "boundary.h0.table", ln);
    };
    I("discretization.n_beam", &cfg.n_beam);
    I("discretization.n_pore", &cfg.n_pore);
    D("discretization.dt", &cfg.dt);
    D("discretization.t_final", &cfg.t_final);
    D("coupling.tol", &cfg.tol);
    I("coupling.max_iter", &cfg.max_iter);
    D("coupling.omega", &cfg.omega);
    D("solver.newton_tol", &cfg.newton_tol);
    I("solver.newton_max_iter", &cfg.newton_max_iter);
    D("solver.gradient_floor", &cfg.gradient_floor);
    S("solver.advection", &cfg.advection);
    S("initial.u0.family", &cfg.u0_family);
    D("initial.u0.alpha", &cfg.u0_alpha);
    S("initial.p0.family", &cfg.p0_family);
    D("initial.p0.value", &cfg.p0_value);
    D("initial.p0.amplitude", &cfg.p0_amplitude);
    D("initial.v0.beta", &cfg.v0_beta);
    D("initial.v0.delta", &cfg.v0_delta);
    B("initial.auto_compatibility", &cfg.auto_compatibility);
    S("output.directory", &cfg.directory);
    I("output.snapshot_stride", &cfg.snapshot_stride);
    B("checks.enabled", &cfg.checks_enabled);
    D("checks.slack_factor", &cfg.check_slack_factor);

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hashpos = s.find('#');
        if (hashpos != std::string::npos) s = s.substr(0, hashpos);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(line) + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(line) + ": key outside any section");
        const std::string path = section + "." + key;
        const auto it = keys.find(path);
        if (it == keys.end())
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + path + "'",
                              path);
        it->second(value, line);
    }

    validate_config(cfg);
    return cfg;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const SimConfig& cfg) {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("config field " + field + ": " + why, field);
    };
    auto positive = [&](double v, const std::string& field) {
        if (!(v > 0.0)) fail(field, "must be > 0, got " + std::to_string(v));
    };
    positive(cfg.constants.m, "material.m");
    positive(cfg.constants.gamma, "material.gamma");
    positive(cfg.constants.k, "material.k");
    positive(cfg.constants.k_v, "material.k_v");
    positive(cfg.constants.kappa, "material.kappa");
    if (cfg.rho.family != "linear" && cfg.rho.family != "tanh")
        fail("material.rho.family", "must be 'linear' or 'tanh'");
    positive(cfg.rho.a, "material.rho.a");
    if (cfg.rho.family == "tanh" && cfg.rho.b < 0.0)
        fail("material.rho.b", "must be >= 0");
    positive(cfg.rho.l, "material.rho.l");
    positive(cfg.nu.l, "material.nu.l");
    positive(cfg.phi.l, "material.phi.l");
    positive(cfg.psi.l, "material.psi.l");

    for (std::size_t i = 1; i < cfg.h0_knots.size(); ++i)
        if (!(cfg.h0_knots[i].first > cfg.h0_knots[i - 1].first))
            fail("boundary.h0.table", "knots must be strictly increasing in t");

    if (cfg.n_beam < 8 || cfg.n_beam > 10000000)
        fail("discretization.n_beam", "need between 8 and 1e7 cells");
    if (cfg.n_pore < 8 || cfg.n_pore > 10000000)
        fail("discretization.n_pore", "need between 8 and 1e7 cells");
    positive(cfg.dt, "discretization.dt");
    positive(cfg.t_final, "discretization.t_final");
    if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) fail("coupling.tol", "must lie in (0,1)");
    if (cfg.max_iter < 1) fail("coupling.max_iter", "must be >= 1");
    if (!(cfg.omega > 0.0 && cfg.omega <= 1.0)) fail("coupling.omega", "must lie in (0,1]");
    positive(cfg.newton_tol, "solver.newton_tol");
    if (cfg.newton_max_iter < 1) fail("solver.newton_max_iter", "must be >= 1");
    if (cfg.advection != "central" && cfg.advection != "upwind")
        fail("solver.advection", "must be 'central' or 'upwind'");

    if (cfg.u0_family != "linear" && cfg.u0_family != "sine")
        fail("initial.u0.family", "must be 'linear' or 'sine'");
    if (cfg.u0_family == "sine" && !(std::abs(cfg.u0_alpha) * M_PI < 1.0))
        fail("initial.u0.alpha",
             "|alpha| pi >= 1 lets u0x touch 0; the model requires u0x > 0 on [0,1]");
    if (cfg.p0_family != "constant" && cfg.p0_family != "cosine")
        fail("initial.p0.family", "must be 'constant' or 'cosine'");
    if (cfg.snapshot_stride < 1) fail("output.snapshot_stride", "must be >= 1");
}

MaterialSystem make_material(const SimConfig& cfg) {
    MaterialSystem m;
    m.constants = cfg.constants;
    m.rho = (cfg.rho.family == "linear") ? DensityLaw::linear(cfg.rho.a, cfg.rho.w0)
                                         : DensityLaw(cfg.rho.a, cfg.rho.b, cfg.rho.l, cfg.rho.w0);
    m.nu = BoundedLipschitzLaw(cfg.nu.c, cfg.nu.l, cfg.nu.ref);
    m.phi = BoundedLipschitzLaw(cfg.phi.c, cfg.phi.l, cfg.phi.ref);
    m.psi = BoundedLipschitzLaw(cfg.psi.c, cfg.psi.l, cfg.psi.ref);
    m.h0 = BoundarySource(cfg.h0_knots);
    return m;
}

BeamProblem make_beam_problem(const SimConfig& cfg) {
    const MaterialSystem m = make_material(cfg);
    BeamProblem p;
    p.constants = m.constants;
    p.phi = m.phi;
    p.nu = m.nu;
    p.cells = cfg.n_beam;
    p.dt = cfg.dt;
    p.newton_tol = cfg.newton_tol;
    p.newton_max_iter = cfg.newton_max_iter;
    p.gradient_floor = cfg.gradient_floor;
    return p;
}

DiffusionProblem make_diffusion_problem(const SimConfig& cfg) {
    const MaterialSystem m = make_material(cfg);
    DiffusionProblem p;
    p.constants = m.constants;
    p.rho = m.rho;
    p.psi = m.psi;
    p.h0 = m.h0;
    p.cells = cfg.n_pore;
    p.dt = cfg.dt;
    p.newton_tol = cfg.newton_tol;
    p.newton_max_iter = cfg.newton_max_iter;
    p.advection = (cfg.advection == "upwind") ? AdvectionScheme::upwind
                                              : AdvectionScheme::central;
    return p;
}

CouplingConfig make_coupling_config(const SimConfig& cfg) {
    return CouplingConfig{cfg.tol, cfg.max_iter, cfg.omega};
}

CoupledState make_initial_state(const SimConfig& cfg) {
    const MaterialSystem material = make_material(cfg);
    validate_assumptions(material);
    const BeamProblem beam_prob = make_beam_problem(cfg);

    // u0: both families satisfy u0(0)=0 and the hinged conditions
    // u0''(0) = u0''(1) = 0 (sin(pi x) vanishes with its second derivative at
    // both ends).
    GridFunction u0(cfg.n_beam);
    for (std::size_t j = 0; j <= cfg.n_beam; ++j) {
        const double x = u0.x(j);
        u0[j] = x + (cfg.u0_family == "sine" ? cfg.u0_alpha * std::sin(M_PI * x) : 0.0);
    }
    if (!(u0.min_cell_gradient() > 0.0))
        throw ConfigError(
            "initial deformation violates the hypothesis u0x > 0 on [0,1]; "
            "reduce initial.u0.alpha",
            "initial.u0.alpha");

    GridFunction p0(cfg.n_pore);
    for (std::size_t j = 0; j <= cfg.n_pore; ++j) {
        const double x = p0.x(j);
        p0[j] = cfg.p0_value +
                (cfg.p0_family == "cosine" ? cfg.p0_amplitude * std::cos(M_PI * x) : 0.0);
    }

    // v0 = beta x + delta sin^2(pi x); the second profile has zero end slope,
    // so beta alone carries the compatibility condition at the free end.
    GridFunction v0(cfg.n_beam);
    for (std::size_t j = 0; j <= cfg.n_beam; ++j) {
        const double sp = std::sin(M_PI * v0.x(j));
        v0[j] = cfg.v0_delta * sp * sp;
    }

    // the compatibility identity needs p_hat at t=0, which needs a snapshot;
    // build the pressure pullback from a provisional rest snapshot
    DeformationSnapshot provisional{u0, v0, GridFunction(cfg.n_beam)};
    GridFunction p_hat0 = pull_back_pressure(p0, provisional);

    double beta = cfg.v0_beta;
    if (cfg.auto_compatibility) {
        beta = solve_compatibility_slope(u0, v0, p_hat0, beam_prob);
    }
    for (std::size_t j = 0; j <= cfg.n_beam; ++j) v0[j] += beta * v0.x(j);

    const double compat = compatibility_residual(u0, v0, p_hat0, beam_prob);
    if (std::abs(compat) > 1e-8)
        throw ConfigError(
            "initial data violate the free-end compatibility condition "
            "(residual " +
                std::to_string(compat) +
                " > 1e-8); enable initial.auto_compatibility or adjust initial.v0.beta",
            "initial.v0.beta");

    DeformationSnapshot snap = make_snapshot(u0, v0, p_hat0, 0.0, beam_prob);
    return make_coupled_state(0.0, std::move(snap), std::move(p0));
}

} // namespace foamswell
