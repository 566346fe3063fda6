#include "foamswell/banded.hpp"

#include "foamswell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace foamswell {

// Storage layout (as in LAPACK xGBTRF): logical entry (i,j) lives at band row
// kl + ku + i - j, valid for -ku-kl <= i-j <= kl. Rows 0..kl-1 are fill space.

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku),
      ab_(static_cast<std::size_t>(2 * kl + ku + 1) * n, 0.0),
      ipiv_(n, 0) {
    if (n <= 0 || kl < 0 || ku < 0) throw std::invalid_argument("BandedMatrix: bad shape");
}

void BandedMatrix::zero() {
    std::fill(ab_.begin(), ab_.end(), 0.0);
    factored_ = false;
}

double& BandedMatrix::at(int i, int j) {
    const int d = i - j;
    if (d > kl_ || -d > ku_ + kl_ || i < 0 || j < 0 || i >= n_ || j >= n_)
        throw std::out_of_range("BandedMatrix::at outside band");
    return band(kl_ + ku_ + d, j);
}

double BandedMatrix::at(int i, int j) const {
    const int d = i - j;
    if (d > kl_ || -d > ku_ + kl_ || i < 0 || j < 0 || i >= n_ || j >= n_)
        return 0.0;
    return band(kl_ + ku_ + d, j);
}

void BandedMatrix::factor() {
    const int kv = kl_ + ku_;
    int ju = 0;
    for (int j = 0; j < n_; ++j) {
        const int km = std::min(kl_, n_ - 1 - j);
        int jp = 0;
        double amax = std::abs(band(kv, j));
        for (int i = 1; i <= km; ++i) {
            const double v = std::abs(band(kv + i, j));
            if (v > amax) { amax = v; jp = i; }
        }
        ipiv_[j] = j + jp;
        if (amax == 0.0)
            throw SolverError("banded LU: exactly singular pivot", 0.0, j);
        ju = std::max(ju, std::min(j + ku_ + jp, n_ - 1));
        if (jp != 0) {
            for (int col = j; col <= ju; ++col)
                std::swap(band(kv + (j + jp) - col, col), band(kv + j - col, col));
        }
        const double piv = band(kv, j);
        for (int i = 1; i <= km; ++i) band(kv + i, j) /= piv;
        for (int col = j + 1; col <= ju; ++col) {
            const double v = band(kv + j - col, col);
            if (v != 0.0)
                for (int i = 1; i <= km; ++i)
                    band(kv + (j + i) - col, col) -= band(kv + i, j) * v;
        }
    }
    factored_ = true;
}

void BandedMatrix::solve(std::vector<double>& b) const {
    if (!factored_) throw std::logic_error("BandedMatrix::solve before factor");
    const int kv = kl_ + ku_;
    for (int j = 0; j < n_ - 1; ++j) {
        if (ipiv_[j] != j) std::swap(b[j], b[ipiv_[j]]);
        const int km = std::min(kl_, n_ - 1 - j);
        for (int i = 1; i <= km; ++i) b[j + i] -= band(kv + i, j) * b[j];
    }
    for (int j = n_ - 1; j >= 0; --j) {
        b[j] /= band(kv, j);
        const int kmax = std::min(kv, j);
        for (int i = 1; i <= kmax; ++i) b[j - i] -= band(kv - i, j) * b[j];
    }
}

} // namespace foamswell
