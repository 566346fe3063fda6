#ifndef FOAMSWELL_GRID_FUNCTION_HPP
#define FOAMSWELL_GRID_FUNCTION_HPP

#include <cstddef>
#include <vector>

namespace foamswell {

/// Nodal values of a scalar field at N+1 uniformly spaced nodes on [0,1].
///
/// The grid is the fixed reference interval shared by the deformation, the
/// velocity and the rescaled pressure. Cell quantities (gradients) live at
/// the N midpoints.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(std::size_t cells, double value = 0.0);
    explicit GridFunction(std::vector<double> nodal_values);

    std::size_t cells() const { return values_.empty() ? 0 : values_.size() - 1; }
    std::size_t nodes() const { return values_.size(); }
    double h() const { return 1.0 / static_cast<double>(cells()); }
    double x(std::size_t j) const { return static_cast<double>(j) * h(); }

    double& operator[](std::size_t j) { return values_[j]; }
    double operator[](std::size_t j) const { return values_[j]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Piecewise-linear interpolation at xi in [0,1] (clamped).
    double interpolate(double xi) const;

    /// Gradient on cell j, (v[j+1]-v[j])/h.
    double cell_gradient(std::size_t j) const;
    double min_cell_gradient() const;

    bool all_finite() const;

private:
    std::vector<double> values_;
};

// Quadrature and norms on the grid.
double trapezoid(const GridFunction& f);
double trapezoid_of_squares(const GridFunction& f);
double l2_norm(const GridFunction& f);            // sqrt(trapezoid of squares)
double max_abs(const GridFunction& f);
double max_abs_diff(const GridFunction& a, const GridFunction& b);

/// max_j |a_j - b_j| / max(max_j |a_j|, floor); floor guards all-zero fields.
double relative_max_change(const GridFunction& a, const GridFunction& b,
                           double floor = 1e-12);

/// Cell-midpoint quadrature of a function of the gradient: sum_j h * g(grad_j).
/// Used for |u_x|^2, |u_x|_{L1} and the 1/u_x^2 integral in the energy.
template <typename F>
double cell_gradient_quadrature(const GridFunction& u, F&& g) {
    double acc = 0.0;
    const double h = u.h();
    for (std::size_t j = 0; j < u.cells(); ++j) acc += h * g(u.cell_gradient(j));
    return acc;
}

/// Nodal second differences. Boundary nodes take the given end values
/// (pass 0 for fields obeying the hinged conditions u_xx(0)=u_xx(1)=0).
std::vector<double> second_difference(const GridFunction& f,
                                      double left_end, double right_end);

/// Nodal second differences with second-order one-sided stencils at the ends,
/// for generic fields with no boundary condition attached.
std::vector<double> second_difference_onesided(const GridFunction& f);

/// Discrete H^2-type norm: sqrt(|z|^2 + |z_x|^2 + |z_xx|^2), trapezoid for the
/// nodal terms, cell quadrature for the gradient, one-sided ends for z_xx.
double discrete_x_norm(const GridFunction& z);

} // namespace foamswell

#endif
