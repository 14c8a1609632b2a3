#include "twostep/initial_estimators.hpp"

#include <cmath>
#include <limits>

#include "twostep/errors.hpp"

namespace twostep {

std::string to_string(InitialMethod m) {
    switch (m) {
        case InitialMethod::ols: return "ols";
        case InitialMethod::univariate: return "univariate";
        case InitialMethod::ridge: return "ridge";
        case InitialMethod::lasso: return "lasso";
    }
    return "?";
}

InitialMethod parse_initial_method(const std::string& name) {
    if (name == "ols") return InitialMethod::ols;
    if (name == "univariate" || name == "univ") return InitialMethod::univariate;
    if (name == "ridge") return InitialMethod::ridge;
    if (name == "lasso") return InitialMethod::lasso;
    throw InputError("unknown initial estimator '" + name + "'");
}

InitialEstimate fit_ols(const Dataset& d) {
    d.validate();
    if (d.p() > d.n()) throw SingularMatrix("OLS needs p <= n (p=" + std::to_string(d.p()) + ", n=" + std::to_string(d.n()) + ")");
    const SymmetricMatrix G = SymmetricMatrix::gram(d.X);
    const Vector c = d.X.transpose() * d.y / static_cast<double>(d.n());
    InitialEstimate est;
    est.method = InitialMethod::ols;
    est.beta = solve_spd(G, c);
    return est;
}

InitialEstimate fit_univariate(const Dataset& d) {
    d.validate();
    InitialEstimate est;
    est.method = InitialMethod::univariate;
    est.beta = d.X.transpose() * d.y / static_cast<double>(d.n());
    return est;
}

InitialEstimate fit_ridge(const Dataset& d, double nu) {
    d.validate();
    if (!(nu > 0.0)) throw InputError("ridge parameter nu must be positive");
    const double n = d.n();
    InitialEstimate est;
    est.method = InitialMethod::ridge;
    est.tuning = nu;
    if (d.p() <= d.n()) {
        Matrix A = SymmetricMatrix::gram(d.X).matrix();
        A.diagonal().array() += nu;
        est.beta = solve_spd(SymmetricMatrix(std::move(A)), Vector(d.X.transpose() * d.y / n));
    } else {
        // Dual form: b = X^T (X X^T + n nu I)^{-1} y.
        Matrix K = d.X * d.X.transpose();
        K = 0.5 * (K + K.transpose());
        K.diagonal().array() += n * nu;
        est.beta = d.X.transpose() * solve_spd(SymmetricMatrix(std::move(K)), d.y);
    }
    return est;
}

Vector default_nu_grid() { return log_grid_descending(1e2, 1e-4, kDefaultNuGridSize).reverse(); }

GcvSelection select_ridge_gcv(const Dataset& d, const Vector& grid) {
    d.validate();
    if (grid.size() == 0) throw InputError("GCV grid is empty");
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        if (!(grid(i) > 0.0)) throw InputError("GCV grid must be strictly positive");

    const double n = d.n();
    Eigen::BDCSVD<Matrix> svd(d.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const Vector uty = svd.matrixU().transpose() * d.y;
    const double outside = std::max(0.0, d.y.squaredNorm() - uty.squaredNorm());

    GcvSelection sel;
    sel.scores = Vector::Constant(grid.size(), std::numeric_limits<double>::infinity());
    int best = -1;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double nnu = n * grid(i);
        double trace = 0.0, rss = outside;
        for (Eigen::Index k = 0; k < sv.size(); ++k) {
            const double d2 = sv(k) * sv(k);
            trace += d2 / (d2 + nnu);
            const double shrink = nnu / (d2 + nnu);
            rss += shrink * shrink * uty(k) * uty(k);
        }
        const double denom = 1.0 - trace / n;
        if (!(denom > 1e-12)) continue;
        sel.scores(i) = (rss / n) / (denom * denom);
        if (best < 0) {
            best = static_cast<int>(i);
            continue;
        }
        const double cur = sel.scores(best), cand = sel.scores(i);
        const double tie = 1e-12 * std::max(std::abs(cur), std::abs(cand));
        if (cand < cur - tie || (std::abs(cand - cur) <= tie && grid(i) > grid(best))) best = static_cast<int>(i);
    }
    if (best < 0) throw DegenerateGCV();

    sel.nu = grid(best);
    const double nnu = n * sel.nu;
    Vector coef = uty;
    for (Eigen::Index k = 0; k < sv.size(); ++k) coef(k) *= sv(k) / (sv(k) * sv(k) + nnu);
    sel.estimate.method = InitialMethod::ridge;
    sel.estimate.tuning = sel.nu;
    sel.estimate.gcv = sel.scores(best);
    sel.estimate.beta = svd.matrixV() * coef;
    return sel;
}

double lasso_lambda_max(const Dataset& d) {
    return inf_norm(Vector(d.X.transpose() * d.y / static_cast<double>(d.n())));
}

Vector default_lambda_grid(double lambda_max, int size, double ratio) {
    const double top = lambda_max > 0.0 ? lambda_max : 1.0;
    return log_grid_descending(top, top * ratio, size);
}

PathSolution lasso_path(const Dataset& d, const Vector& grid, const CdOptions& options) {
    d.validate();
    check_descending_grid(grid);
    const PenalizedProblem problem = PenalizedProblem::build(d.X, d.y, Vector::Ones(d.p()), false);
    PathSolution path;
    path.method = "lasso";
    Vector warm = Vector::Zero(d.p());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        CdResult r = solve_weighted_l1(problem, grid(i), warm, options);
        path.total_sweeps += r.sweeps;
        warm = r.theta;
        path.push(grid(i), std::move(r.theta), problem.kkt_residual(warm, grid(i)));
    }
    return path;
}

InitialEstimate fit_lasso(const Dataset& d, double lambda, const CdOptions& options) {
    d.validate();
    if (!(lambda > 0.0)) throw InputError("lasso lambda must be positive");
    const PenalizedProblem problem = PenalizedProblem::build(d.X, d.y, Vector::Ones(d.p()), false);
    CdResult r = solve_weighted_l1(problem, lambda, Vector::Zero(d.p()), options);
    InitialEstimate est;
    est.method = InitialMethod::lasso;
    est.tuning = lambda;
    est.iterations = r.sweeps;
    est.beta = std::move(r.theta);
    return est;
}

}  // namespace twostep
