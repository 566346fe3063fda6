#ifndef FOAMSWELL_BANDED_HPP
#define FOAMSWELL_BANDED_HPP

#include <cstddef>
#include <vector>

namespace foamswell {

/// Banded matrix with kl sub- and ku super-diagonals, LAPACK GB storage with
/// kl extra rows of fill space for the pivoted LU. The beam Jacobian needs
/// (kl,ku)=(3,2) — the 5-point u_xxxx stencil plus the one-sided boundary row
/// — and the pore Jacobian is tridiagonal.
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    void zero();
    double& at(int i, int j);        // |i-j| must lie inside the band
    double at(int i, int j) const;
    void add(int i, int j, double v) { at(i, j) += v; }

    /// In-place LU with partial pivoting. Throws SolverError on exact
    /// singularity. After factor() the matrix holds the factors.
    void factor();

    /// Solve A x = b using the factors; b is overwritten with x.
    void solve(std::vector<double>& b) const;

    bool factored() const { return factored_; }

private:
    int n_, kl_, ku_;
    std::vector<double> ab_;     // (2*kl + ku + 1) x n, ab_[row*n + col]
    std::vector<int> ipiv_;
    bool factored_ = false;

    double& band(int r, int j) { return ab_[static_cast<std::size_t>(r) * n_ + j]; }
    double band(int r, int j) const { return ab_[static_cast<std::size_t>(r) * n_ + j]; }
};

} // namespace foamswell

#endif
