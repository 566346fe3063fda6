#include "foamswell/deformation_map.hpp"

#include <algorithm>
#include <stdexcept>

namespace foamswell {

double invert_deformation(const DeformationSnapshot& snap, double y) {
    if (y < 0.0) throw std::domain_error("invert_deformation: y must be >= 0");
    const auto& u = snap.u.values();
    if (y >= u.back()) return 1.0;
    if (y <= u.front()) return 0.0;
    // binary search for the cell, then the linear solve inside it
    const auto it = std::upper_bound(u.begin(), u.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - u.begin()) - 1;
    const double theta = (y - u[i]) / (u[i + 1] - u[i]);
    return (static_cast<double>(i) + theta) * snap.u.h();
}

GridFunction pull_back_pressure(const GridFunction& p_bar, const DeformationSnapshot& snap) {
    const double s = snap.s();
    GridFunction p_hat(snap.u.cells());
    for (std::size_t j = 0; j < snap.u.nodes(); ++j)
        p_hat[j] = p_bar.interpolate(snap.u[j] / s);
    p_hat[p_hat.cells()] = p_bar.back();  // u(1)/s = 1 by definition
    return p_hat;
}

GridFunction pull_back_velocity(const DeformationSnapshot& snap, std::size_t cells) {
    const double s = snap.s();
    if (cells == 0) cells = snap.u.cells();
    GridFunction v_bar(cells);
    for (std::size_t j = 0; j <= cells; ++j)
        v_bar[j] = snap.v.interpolate(invert_deformation(snap, s * v_bar.x(j)));
    v_bar[0] = 0.0;
    v_bar[cells] = snap.s_dot();
    return v_bar;
}

} // namespace foamswell
