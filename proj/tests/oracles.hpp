#pragma once

// Reference implementations used only by the tests. They deliberately avoid
// the library's solvers.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// (1/2n)||y - A t||^2 + lambda sum w_j |t_j|, t >= 0 when nonneg; infinite
// weight pins t_j = 0.
struct Problem {
    Matrix G;  // (1/n) A^T A
    Vector c;  // (1/n) A^T y
    double half_ysq = 0.0;
    Vector w;
    bool nonneg = false;

    static Problem from(const Matrix& A, const Vector& y, const Vector& w, bool nonneg) {
        const double n = static_cast<double>(A.rows());
        return Problem{A.transpose() * A / n, A.transpose() * y / n, 0.5 * y.squaredNorm() / n, w, nonneg};
    }

    double objective(const Vector& t, double lambda) const {
        double pen = 0.0;
        for (Eigen::Index j = 0; j < t.size(); ++j)
            if (t(j) != 0.0) pen += w(j) * std::abs(t(j));
        return half_ysq - c.dot(t) + 0.5 * t.dot(G * t) + lambda * pen;
    }
};

// Accelerated proximal gradient (FISTA) run to a fixed-point tolerance.
inline Vector proximal_gradient(const Problem& pr, double lambda, double tol = 1e-13, int max_iter = 2000000) {
    const Eigen::Index p = pr.c.size();
    Eigen::SelfAdjointEigenSolver<Matrix> es(pr.G);
    const double L = std::max(es.eigenvalues().maxCoeff(), 1e-12);
    auto prox = [&](const Vector& v) {
        Vector out(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            if (!std::isfinite(pr.w(j))) {
                out(j) = 0.0;
                continue;
            }
            const double t = lambda * pr.w(j) / L;
            double z = v(j) > t ? v(j) - t : (v(j) < -t ? v(j) + t : 0.0);
            if (pr.nonneg && z < 0.0) z = 0.0;
            out(j) = z;
        }
        return out;
    };
    Vector x = Vector::Zero(p), z = x;
    double tk = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        const Vector grad = pr.G * z - pr.c;
        const Vector xn = prox(z - grad / L);
        const double step = (xn - x).lpNorm<Eigen::Infinity>();
        if ((z - xn).dot(xn - x) > 0.0) {  // adaptive restart
            tk = 1.0;
            z = xn;
        } else {
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
            z = xn + ((tk - 1.0) / tn) * (xn - x);
            tk = tn;
        }
        x = xn;
        if (step < tol && it > 10) break;
    }
    return x;
}

// Exhaustive search: every support and sign pattern, restricted stationarity
// solved exactly, sign-consistent candidates kept, smallest objective wins.
struct Enumerated {
    Vector theta;
    double objective = std::numeric_limits<double>::infinity();
};

inline Enumerated enumerate_signs(const Problem& pr, double lambda) {
    const int p = static_cast<int>(pr.c.size());
    Enumerated best;
    best.theta = Vector::Zero(p);
    best.objective = pr.objective(best.theta, lambda);
    int total = 1;
    for (int j = 0; j < p; ++j) total *= 3;  // each coordinate: 0, +, -
    for (int code = 1; code < total; ++code) {
        std::vector<int> idx;
        std::vector<double> sg;
        int c = code;
        bool ok = true;
        for (int j = 0; j < p; ++j) {
            const int digit = c % 3;
            c /= 3;
            if (digit == 0) continue;
            const double s = digit == 1 ? 1.0 : -1.0;
            if (!std::isfinite(pr.w(j)) || (pr.nonneg && s < 0.0)) {
                ok = false;
                break;
            }
            idx.push_back(j);
            sg.push_back(s);
        }
        if (!ok) continue;
        const int k = static_cast<int>(idx.size());
        Matrix GA(k, k);
        Vector rhs(k);
        for (int a = 0; a < k; ++a) {
            rhs(a) = pr.c(idx[a]) - lambda * pr.w(idx[a]) * sg[a];
            for (int b = 0; b < k; ++b) GA(a, b) = pr.G(idx[a], idx[b]);
        }
        Eigen::FullPivLU<Matrix> lu(GA);
        if (lu.rank() < k) continue;
        const Vector tA = lu.solve(rhs);
        bool consistent = true;
        for (int a = 0; a < k; ++a)
            if (tA(a) * sg[a] <= 0.0) consistent = false;
        if (!consistent) continue;
        Vector t = Vector::Zero(p);
        for (int a = 0; a < k; ++a) t(idx[a]) = tA(a);
        const double obj = pr.objective(t, lambda);
        if (obj < best.objective) {
            best.objective = obj;
            best.theta = t;
        }
    }
    return best;
}

// Column standardization written out longhand: mean 0 and (1/n)||x||^2 = 1.
struct Standardized {
    Matrix X;
    Vector y;
    Vector mean, scale;
    double ymean = 0.0;
};

inline Standardized standardize(const Matrix& X, const Vector& y) {
    Standardized s;
    const double n = static_cast<double>(X.rows());
    s.mean = X.colwise().mean().transpose();
    s.X = X.rowwise() - s.mean.transpose();
    s.scale = (s.X.colwise().squaredNorm() / n).cwiseSqrt().transpose();
    for (Eigen::Index j = 0; j < X.cols(); ++j) s.X.col(j) /= s.scale(j);
    s.ymean = y.mean();
    s.y = y.array() - s.ymean;
    return s;
}

// Leave-one-out CV error of the standardized Lasso computed directly.
inline Vector loo_lasso_error(const Matrix& X, const Vector& y, const Vector& grid) {
    const Eigen::Index n = X.rows(), p = X.cols();
    Vector err = Vector::Zero(grid.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        Matrix Xt(n - 1, p);
        Vector yt(n - 1);
        for (Eigen::Index r = 0, k = 0; r < n; ++r) {
            if (r == i) continue;
            Xt.row(k) = X.row(r);
            yt(k++) = y(r);
        }
        const Standardized s = standardize(Xt, yt);
        const Problem pr = Problem::from(s.X, s.y, Vector::Ones(p), false);
        for (Eigen::Index g = 0; g < grid.size(); ++g) {
            const Vector b = proximal_gradient(pr, grid(g));
            const Vector beta = b.cwiseQuotient(s.scale);
            const double intercept = s.ymean - s.mean.dot(beta);
            const double r = y(i) - X.row(i).dot(beta) - intercept;
            err(g) += r * r / static_cast<double>(n);
        }
    }
    return err;
}

// Random n x p matrix with orthonormal columns scaled so (1/n) X^T X = I and
// every column has mean zero.
template <typename Rng>
Matrix orthonormal_design(int n, int p, Rng& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    Matrix M(n, p + 1);
    M.col(0).setOnes();
    for (int i = 0; i < n; ++i)
        for (int j = 1; j <= p; ++j) M(i, j) = N(rng);
    Eigen::HouseholderQR<Matrix> qr(M);
    Matrix Q = qr.householderQ() * Matrix::Identity(n, p + 1);
    return Q.rightCols(p) * std::sqrt(static_cast<double>(n));
}

}  // namespace oracle
