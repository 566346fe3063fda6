#include "foamswell/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace foamswell {

GridFunction::GridFunction(std::size_t cells, double value) {
    if (cells < 8) throw std::invalid_argument("GridFunction: need at least 8 cells");
    values_.assign(cells + 1, value);
}

GridFunction::GridFunction(std::vector<double> nodal_values)
    : values_(std::move(nodal_values)) {
    if (values_.size() < 9) throw std::invalid_argument("GridFunction: need at least 8 cells");
}

double GridFunction::interpolate(double xi) const {
    const std::size_t n = cells();
    double pos = xi * static_cast<double>(n);
    if (pos <= 0.0) return values_.front();
    if (pos >= static_cast<double>(n)) return values_.back();
    auto i = static_cast<std::size_t>(pos);
    if (i >= n) i = n - 1;
    const double theta = pos - static_cast<double>(i);
    return (1.0 - theta) * values_[i] + theta * values_[i + 1];
}

double GridFunction::cell_gradient(std::size_t j) const {
    return (values_[j + 1] - values_[j]) / h();
}

double GridFunction::min_cell_gradient() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cells(); ++j) m = std::min(m, cell_gradient(j));
    return m;
}

bool GridFunction::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v); });
}

double trapezoid(const GridFunction& f) {
    const std::size_t n = f.cells();
    double acc = 0.5 * (f[0] + f[n]);
    for (std::size_t j = 1; j < n; ++j) acc += f[j];
    return acc * f.h();
}

double trapezoid_of_squares(const GridFunction& f) {
    const std::size_t n = f.cells();
    double acc = 0.5 * (f[0] * f[0] + f[n] * f[n]);
    for (std::size_t j = 1; j < n; ++j) acc += f[j] * f[j];
    return acc * f.h();
}

double l2_norm(const GridFunction& f) { return std::sqrt(trapezoid_of_squares(f)); }

double max_abs(const GridFunction& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.nodes(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

double relative_max_change(const GridFunction& a, const GridFunction& b, double floor) {
    return max_abs_diff(a, b) / std::max(max_abs(a), floor);
}

std::vector<double> second_difference(const GridFunction& f,
                                      double left_end, double right_end) {
    const std::size_t n = f.cells();
    const double h2 = f.h() * f.h();
    std::vector<double> d(n + 1);
    d[0] = left_end;
    d[n] = right_end;
    for (std::size_t j = 1; j < n; ++j)
        d[j] = (f[j - 1] - 2.0 * f[j] + f[j + 1]) / h2;
    return d;
}

std::vector<double> second_difference_onesided(const GridFunction& f) {
    const std::size_t n = f.cells();
    const double h2 = f.h() * f.h();
    std::vector<double> d(n + 1);
    for (std::size_t j = 1; j < n; ++j)
        d[j] = (f[j - 1] - 2.0 * f[j] + f[j + 1]) / h2;
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[n] = (2.0 * f[n] - 5.0 * f[n - 1] + 4.0 * f[n - 2] - f[n - 3]) / h2;
    return d;
}

double discrete_x_norm(const GridFunction& z) {
    const double a = trapezoid_of_squares(z);
    const double b = cell_gradient_quadrature(z, [](double g) { return g * g; });
    GridFunction zxx(second_difference_onesided(z));
    const double c = trapezoid_of_squares(zxx);
    return std::sqrt(a + b + c);
}

} // namespace foamswell
