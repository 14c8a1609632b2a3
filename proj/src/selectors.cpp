#include "twostep/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "twostep/errors.hpp"

namespace twostep {

namespace {

void check_init(const Dataset& d, const InitialEstimate& init) {
    d.validate();
    if (init.beta.size() != d.p())
        throw InputError("initial estimate has length " + std::to_string(init.beta.size()) + ", expected " +
                         std::to_string(d.p()));
    if (!init.beta.allFinite()) throw InputError("initial estimate is not finite");
}

Vector garrote_weights(const Vector& beta_init) {
    Vector w(beta_init.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = std::abs(beta_init(j)) < kZeroInitial ? kExcluded : 1.0;
    return w;
}

PenalizedProblem garrote_problem(const Dataset& d, const InitialEstimate& init) {
    return PenalizedProblem::build(garrote_design(d, init.beta), d.y, garrote_weights(init.beta), true);
}

PenalizedProblem alasso_problem(const Dataset& d, const InitialEstimate& init, double gamma) {
    if (!(gamma > 0.0)) throw InputError("gamma must be positive");
    Vector w = alasso_weights(init.beta, gamma);
    if (!(w.minCoeff() < kExcluded)) throw AllWeightsInfinite();
    return PenalizedProblem::build(d.X, d.y, std::move(w), false);
}

}  // namespace

Matrix garrote_design(const Dataset& d, const Vector& beta_init) {
    return d.X * beta_init.asDiagonal();
}

double garrote_lambda_max(const Dataset& d, const InitialEstimate& init) {
    check_init(d, init);
    return garrote_problem(d, init).lambda_max();
}

GarroteSolution garrote_fit(const Dataset& d, const InitialEstimate& init, double lambda, const CdOptions& options) {
    check_init(d, init);
    if (!(lambda > 0.0)) throw InputError("lambda must be positive");
    const PenalizedProblem pr = garrote_problem(d, init);
    CdResult r = solve_weighted_l1(pr, lambda, Vector::Zero(d.p()), options);
    GarroteSolution sol;
    sol.lambda = lambda;
    sol.sweeps = r.sweeps;
    sol.kkt_residual = pr.kkt_residual(r.theta, lambda);
    sol.beta_ng = init.beta.cwiseProduct(r.theta);
    sol.d = std::move(r.theta);
    return sol;
}

PathSolution garrote_path(const Dataset& d, const InitialEstimate& init, const Vector& grid, const CdOptions& options) {
    check_init(d, init);
    check_descending_grid(grid);
    const PenalizedProblem pr = garrote_problem(d, init);
    PathSolution path;
    path.method = "garrote";
    Vector warm = Vector::Zero(d.p());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        CdResult r = solve_weighted_l1(pr, grid(i), warm, options);
        path.total_sweeps += r.sweeps;
        warm = r.theta;
        path.push(grid(i), init.beta.cwiseProduct(r.theta), pr.kkt_residual(r.theta, grid(i)));
    }
    return path;
}

Vector alasso_weights(const Vector& beta_init, double gamma) {
    Vector w(beta_init.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        const double a = std::abs(beta_init(j));
        w(j) = a < kZeroInitial ? kExcluded : std::pow(a, -gamma);
    }
    return w;
}

double alasso_lambda_max(const Dataset& d, const InitialEstimate& init, double gamma) {
    check_init(d, init);
    return alasso_problem(d, init, gamma).lambda_max();
}

Vector alasso_fit(const Dataset& d, const InitialEstimate& init, double lambda, double gamma, const CdOptions& options) {
    check_init(d, init);
    if (!(lambda > 0.0)) throw InputError("lambda must be positive");
    const PenalizedProblem pr = alasso_problem(d, init, gamma);
    return solve_weighted_l1(pr, lambda, Vector::Zero(d.p()), options).theta;
}

Vector alasso_fit_dform(const Dataset& d, const InitialEstimate& init, double lambda, const CdOptions& options) {
    check_init(d, init);
    if (!(lambda > 0.0)) throw InputError("lambda must be positive");
    const Vector w = garrote_weights(init.beta);
    if (!(w.minCoeff() < kExcluded)) throw AllWeightsInfinite();
    const PenalizedProblem pr = PenalizedProblem::build(garrote_design(d, init.beta), d.y, w, false);
    const Vector dhat = solve_weighted_l1(pr, lambda, Vector::Zero(d.p()), options).theta;
    return init.beta.cwiseProduct(dhat);
}

PathSolution alasso_path(const Dataset& d, const InitialEstimate& init, const Vector& grid, double gamma,
                         const CdOptions& options) {
    check_init(d, init);
    check_descending_grid(grid);
    const PenalizedProblem pr = alasso_problem(d, init, gamma);
    PathSolution path;
    path.method = "alasso";
    Vector warm = Vector::Zero(d.p());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        CdResult r = solve_weighted_l1(pr, grid(i), warm, options);
        path.total_sweeps += r.sweeps;
        warm = r.theta;
        const double kkt = pr.kkt_residual(r.theta, grid(i));
        path.push(grid(i), std::move(r.theta), kkt);
    }
    return path;
}

Vector hard_threshold(const Vector& beta_init, double lambda) {
    if (!(lambda > 0.0)) throw InputError("lambda must be positive");
    Vector out = beta_init;
    for (Eigen::Index j = 0; j < out.size(); ++j)
        if (!(std::abs(out(j)) >= lambda)) out(j) = 0.0;
    return out;
}

Vector hard_threshold_grid(const Vector& beta_init) {
    std::vector<double> mags;
    for (Eigen::Index j = 0; j < beta_init.size(); ++j) {
        const double a = std::abs(beta_init(j));
        if (a > 0.0) mags.push_back(a);
    }
    std::sort(mags.begin(), mags.end(), std::greater<>());
    mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
    std::vector<double> grid;
    if (mags.empty()) {
        grid.push_back(1.0);
    } else {
        grid.push_back(mags.front() * (1.0 + 1e-9));
        grid.insert(grid.end(), mags.begin(), mags.end());
        grid.push_back(0.5 * mags.back());
    }
    return Eigen::Map<Vector>(grid.data(), static_cast<Eigen::Index>(grid.size()));
}

PathSolution hard_threshold_path(const Vector& beta_init, const Vector& grid) {
    check_descending_grid(grid);
    PathSolution path;
    path.method = "hard_threshold";
    for (Eigen::Index i = 0; i < grid.size(); ++i) path.push(grid(i), hard_threshold(beta_init, grid(i)));
    return path;
}

OracleSelection select_lambda_oracle(const PathSolution& path, const SignVector& truth) {
    if (path.size() == 0) throw InputError("oracle selection needs a nonempty path");
    OracleSelection sel;
    for (int i = 0; i < path.size(); ++i) {
        if (path.signs[i] == truth) {
            sel.lambda = path.lambdas(i);
            sel.index = i;
            sel.success = true;
            break;
        }
    }
    return sel;
}

}  // namespace twostep
