#ifndef FOAMSWELL_REPORT_IO_HPP
#define FOAMSWELL_REPORT_IO_HPP

#include "foamswell/coupled_stepper.hpp"
#include "foamswell/diagnostics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace foamswell {

/// Column order is part of the contract: t, s, s_dot, mass, energy,
/// min_strain, strain_bound, picard_iters, newton_iters_beam,
/// newton_iters_pore. '.' decimal separator, '\n' line endings, no
/// wall-clock data (outputs must be bitwise reproducible).
void write_timeseries_csv(const std::string& path, const RunReport& report);

/// Snapshot columns: x, u, v, p_bar, p_hat. Fields on coarser grids are
/// interpolated to the finer of the two so every row shares one x.
void write_snapshot_csv(const std::string& path, const CoupledState& state);

struct ReportMetadata {
    std::string config_hash;
    std::string version;
    double wall_time_seconds = 0.0;
    bool completed = false;
    std::string error;
    bool relaxation_fallback = false;
};

void write_report_json(const std::string& path, const InvariantReport& checks,
                       const ReportMetadata& meta);

struct OrderRow {
    std::string suite;
    std::string case_name;
    std::string metric;   // e.g. "error", "slope", "band_lo", "band_hi"
    double param = 0.0;   // h, dt or 0 for scalar metrics
    double value = 0.0;
};

void write_orders_csv(const std::string& path, const std::vector<OrderRow>& rows);

std::string format_double(double v);   // %.17g, the CSV number format

} // namespace foamswell

#endif
