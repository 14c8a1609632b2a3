#include "twostep/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "twostep/errors.hpp"

namespace twostep {

SymmetricMatrix::SymmetricMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
        throw InputError("symmetric matrix must be square with dim >= 1");
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-12 * scale))
        throw InputError("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    entries_ = 0.5 * (entries_ + entries_.transpose());
}

SymmetricMatrix SymmetricMatrix::gram(const Matrix& X) {
    const double n = static_cast<double>(X.rows());
    Matrix g = Matrix::Zero(X.cols(), X.cols());
    g.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose(), 1.0 / n);
    Matrix full = g.selfadjointView<Eigen::Lower>();
    return SymmetricMatrix(std::move(full));
}

namespace {

Eigen::LLT<Matrix> checked_cholesky(const SymmetricMatrix& A) {
    Eigen::LLT<Matrix> llt(A.matrix());
    const double max_diag = A.matrix().diagonal().cwiseAbs().maxCoeff();
    if (llt.info() != Eigen::Success || !(max_diag > 0.0)) throw SingularMatrix();
    const Vector pivots = Matrix(llt.matrixL()).diagonal().array().square();
    if (!(pivots.minCoeff() >= 1e-12 * max_diag)) throw SingularMatrix();
    return llt;
}

}  // namespace

Vector solve_spd(const SymmetricMatrix& A, const Vector& b) {
    if (b.size() != A.dim()) throw InputError("solve_spd: dimension mismatch");
    return checked_cholesky(A).solve(b);
}

Matrix solve_spd(const SymmetricMatrix& A, const Matrix& B) {
    if (B.rows() != A.dim()) throw InputError("solve_spd: dimension mismatch");
    return checked_cholesky(A).solve(B);
}

SpectralDecomposition eigh(const SymmetricMatrix& A, double rank_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(A.matrix());
    if (solver.info() != Eigen::Success) throw NonConvergence();

    // Eigen returns ascending order; flip to non-increasing.
    const int p = A.dim();
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    const double top = out.eigenvalues(0);
    out.rank = 0;
    if (top > 0.0) {
        for (int j = 0; j < p; ++j)
            if (out.eigenvalues(j) > rank_tol * top) ++out.rank;
    }
    return out;
}

double matrix_inf_norm(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    return M.cwiseAbs().rowwise().sum().maxCoeff();
}

Vector log_grid_descending(double hi, double lo, int n) {
    if (n < 1 || !(hi > 0.0) || !(lo > 0.0) || lo > hi)
        throw InputError("log grid requires n >= 1 and 0 < lo <= hi");
    Vector g(n);
    if (n == 1) {
        g(0) = hi;
        return g;
    }
    const double a = std::log(hi), b = std::log(lo);
    for (int i = 0; i < n; ++i) g(i) = std::exp(a + (b - a) * i / (n - 1));
    g(0) = hi;
    g(n - 1) = lo;
    return g;
}

}  // namespace twostep
