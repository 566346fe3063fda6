#ifndef FOAMSWELL_QUADRATURE_HPP
#define FOAMSWELL_QUADRATURE_HPP

#include <cstddef>
#include <vector>

namespace foamswell {

/// Gauss-Legendre rule with q points mapped to [0,1].
struct GaussLegendre {
    explicit GaussLegendre(int points);
    std::vector<double> x;   // nodes in (0,1)
    std::vector<double> w;   // weights summing to 1

    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(x[i]);
        return acc;
    }
};

/// Composite Simpson on [a,b] with 2*half_intervals panels; used by tests and
/// the constitutive primitive checks.
template <typename F>
double simpson(F&& f, double a, double b, int half_intervals = 1000) {
    const int n = 2 * half_intervals;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace foamswell

#endif
