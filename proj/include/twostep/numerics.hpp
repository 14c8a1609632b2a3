#pragma once

#include <Eigen/Dense>

namespace twostep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense symmetric matrix. Construction checks symmetry to 1e-12 relative to
/// the largest entry and then symmetrizes exactly.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(Matrix entries);

    /// (1/n) X^T X for an n x p design.
    static SymmetricMatrix gram(const Matrix& X);

    int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    const Matrix& matrix() const noexcept { return entries_; }
    double operator()(int i, int j) const { return entries_(i, j); }

private:
    Matrix entries_;
};

struct SpectralDecomposition {
    Vector eigenvalues;   // non-increasing
    Matrix eigenvectors;  // orthonormal columns, aligned with eigenvalues
    int rank = 0;         // #{eigenvalues > rank_tol * eigenvalues[0]}
};

inline constexpr double kDefaultRankTol = 1e-10;

/// Cholesky solve. Throws SingularMatrix when a pivot drops below
/// 1e-12 * max diagonal; no jitter is ever added.
Vector solve_spd(const SymmetricMatrix& A, const Vector& b);
Matrix solve_spd(const SymmetricMatrix& A, const Matrix& B);

SpectralDecomposition eigh(const SymmetricMatrix& A, double rank_tol = kDefaultRankTol);

inline double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

inline double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Max absolute row sum.
double matrix_inf_norm(const Matrix& M);

/// n log-spaced points from hi down to lo (both included).
Vector log_grid_descending(double hi, double lo, int n);

}  // namespace twostep
