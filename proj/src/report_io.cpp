#include "foamswell/report_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace foamswell {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

} // namespace

void write_timeseries_csv(const std::string& path, const RunReport& report) {
    auto out = open_or_throw(path);
    out << "t,s,s_dot,mass,energy,min_strain,strain_bound,picard_iters,"
           "newton_iters_beam,newton_iters_pore\n";
    for (const auto& r : report.rows) {
        out << format_double(r.t) << ',' << format_double(r.s) << ','
            << format_double(r.s_dot) << ',' << format_double(r.mass) << ','
            << format_double(r.energy) << ',' << format_double(r.min_strain) << ','
            << format_double(r.strain_bound) << ',' << r.picard_iters << ','
            << r.newton_iters_beam << ',' << r.newton_iters_pore << '\n';
    }
}

void write_snapshot_csv(const std::string& path, const CoupledState& state) {
    auto out = open_or_throw(path);
    out << "x,u,v,p_bar,p_hat\n";
    const std::size_t cells = std::max(state.beam.u.cells(), state.p_bar.cells());
    for (std::size_t j = 0; j <= cells; ++j) {
        const double x = static_cast<double>(j) / static_cast<double>(cells);
        out << format_double(x) << ',' << format_double(state.beam.u.interpolate(x)) << ','
            << format_double(state.beam.v.interpolate(x)) << ','
            << format_double(state.p_bar.interpolate(x)) << ','
            << format_double(state.p_hat.interpolate(x)) << '\n';
    }
}

void write_report_json(const std::string& path, const InvariantReport& checks,
                       const ReportMetadata& meta) {
    nlohmann::json j;
    j["metadata"] = {
        {"config_hash", meta.config_hash},
        {"version", meta.version},
        {"wall_time_seconds", meta.wall_time_seconds},
        {"completed", meta.completed},
        {"error", meta.error},
        {"relaxation_fallback", meta.relaxation_fallback},
    };
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"measured", c.measured},
                               {"bound", c.bound},
                               {"margin", c.margin}});
    }
    auto out = open_or_throw(path);
    out << j.dump(2) << '\n';
}

void write_orders_csv(const std::string& path, const std::vector<OrderRow>& rows) {
    auto out = open_or_throw(path);
    out << "suite,case,metric,param,value\n";
    for (const auto& r : rows) {
        out << r.suite << ',' << r.case_name << ',' << r.metric << ','
            << format_double(r.param) << ',' << format_double(r.value) << '\n';
    }
}

} // namespace foamswell
