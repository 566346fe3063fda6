#ifndef FOAMSWELL_DEFORMATION_MAP_HPP
#define FOAMSWELL_DEFORMATION_MAP_HPP

#include "foamswell/grid_function.hpp"

namespace foamswell {

/// Nodal deformation u, velocity v = u_t and acceleration on the fixed grid.
/// The acceleration is the Newmark internal state (the spatial operator over
/// m at the snapshot's time); it rides along so stepping stays stateless.
///
/// Invariants: u(0)=0, v(0)=0, u strictly increasing across every cell.
/// The free-boundary position is s = u at the last node, s' = v there.
struct DeformationSnapshot {
    GridFunction u;
    GridFunction v;
    GridFunction a;

    double s() const { return u.back(); }
    double s_dot() const { return v.back(); }
    bool monotone(double floor = 0.0) const { return u.min_cell_gradient() > floor; }
};

/// Inverse of y = u(x) under piecewise-linear interpolation. Returns the x in
/// [0,1] with u(x) = y for y in [0, s]; beyond the free boundary (y > s) it
/// returns 1, the extension used when comparing deformations of different
/// lengths. y < 0 is a domain error.
double invert_deformation(const DeformationSnapshot& snap, double y);

/// p_hat(x) = p_bar(u(x)/s): pressure pulled back to material coordinates.
/// Monotonicity gives u(x)/s in [0,1], so no extrapolation ever happens; the
/// last node is pinned exactly, p_hat(1) = p_bar(1).
GridFunction pull_back_pressure(const GridFunction& p_bar, const DeformationSnapshot& snap);

/// v_bar(x) = v(u^{-1}(s x)): velocity seen from the rescaled liquid domain.
/// Endpoints are pinned exactly: v_bar(0) = 0, v_bar(1) = s'. The result is
/// evaluated on a grid with `cells` cells (the pore grid when it differs
/// from the beam grid); 0 means "same as the beam grid".
GridFunction pull_back_velocity(const DeformationSnapshot& snap, std::size_t cells = 0);

} // namespace foamswell

#endif
