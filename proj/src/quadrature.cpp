#include "foamswell/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace foamswell {

// Nodes by Newton iteration on P_q with the standard asymptotic initial guess.
GaussLegendre::GaussLegendre(int points) {
    if (points < 1) throw std::invalid_argument("GaussLegendre: need >= 1 point");
    const int q = points;
    x.resize(q);
    w.resize(q);
    for (int i = 0; i < q; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_q(t) and P_q'(t)
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= q; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        // map [-1,1] -> [0,1]
        x[q - 1 - i] = 0.5 * (1.0 + t);
        w[q - 1 - i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

} // namespace foamswell
