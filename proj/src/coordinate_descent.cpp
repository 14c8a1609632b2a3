#include "twostep/coordinate_descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "twostep/errors.hpp"

namespace twostep {

PenalizedProblem PenalizedProblem::build(const Matrix& A, const Vector& y, Vector weights, bool nonnegative) {
    if (A.rows() != y.size()) throw InputError("penalized problem: row mismatch");
    if (weights.size() != A.cols()) throw InputError("penalized problem: weight length mismatch");
    const double n = static_cast<double>(A.rows());
    PenalizedProblem pr;
    pr.gram = SymmetricMatrix::gram(A).matrix();
    pr.corr = A.transpose() * y / n;
    pr.half_ysq = 0.5 * y.squaredNorm() / n;
    pr.weights = std::move(weights);
    pr.nonnegative = nonnegative;
    return pr;
}

double PenalizedProblem::objective(const Vector& theta, double lambda) const {
    double penalty = 0.0;
    for (int j = 0; j < dim(); ++j)
        if (theta(j) != 0.0) penalty += weights(j) * std::abs(theta(j));
    return half_ysq - corr.dot(theta) + 0.5 * theta.dot(gram * theta) + lambda * penalty;
}

Vector PenalizedProblem::gradient(const Vector& theta) const { return corr - gram * theta; }

double PenalizedProblem::kkt_residual(const Vector& theta, double lambda) const {
    const Vector g = gradient(theta);
    double worst = 0.0;
    for (int j = 0; j < dim(); ++j) {
        if (excluded(j)) {
            worst = std::max(worst, std::abs(theta(j)));
            continue;
        }
        const double t = lambda * weights(j);
        double v;
        if (theta(j) != 0.0) {
            if (nonnegative && theta(j) < 0.0) v = std::abs(theta(j));
            else v = std::abs(g(j) - t * (theta(j) > 0.0 ? 1.0 : -1.0));
        } else {
            v = nonnegative ? std::max(0.0, g(j) - t) : std::max(0.0, std::abs(g(j)) - t);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

double PenalizedProblem::lambda_max() const {
    double best = 0.0;
    for (int j = 0; j < dim(); ++j) {
        if (excluded(j) || weights(j) <= 0.0) continue;
        const double c = nonnegative ? std::max(0.0, corr(j)) : std::abs(corr(j));
        double l = c / weights(j);
        while (l * weights(j) < c) l = std::nextafter(l, kExcluded);  // zero must be optimal at l itself
        best = std::max(best, l);
    }
    return best;
}

namespace {

class Solver {
public:
    Solver(const PenalizedProblem& pr, double lambda, Vector theta)
        : pr_(pr), lambda_(lambda), theta_(std::move(theta)) {
        for (int j = 0; j < pr_.dim(); ++j)
            if (pr_.excluded(j)) theta_(j) = 0.0;
        grad_ = pr_.gradient(theta_);
    }

    double update(int j) {
        if (pr_.excluded(j)) return 0.0;
        const double gjj = pr_.gram(j, j);
        const double old = theta_(j);
        double fresh = 0.0;
        if (gjj > 0.0) {
            const double z = grad_(j) + gjj * old;
            const double t = lambda_ * pr_.weights(j);
            fresh = pr_.nonnegative ? std::max(0.0, z - t) / gjj : soft_threshold(z, t) / gjj;
        }
        const double delta = fresh - old;
        if (delta != 0.0) {
            theta_(j) = fresh;
            grad_ -= pr_.gram.col(j) * delta;
        }
        return std::abs(delta);
    }

    double full_sweep() {
        double m = 0.0;
        for (int j = 0; j < pr_.dim(); ++j) m = std::max(m, update(j));
        return m;
    }

    double active_sweep(const std::vector<int>& active) {
        double m = 0.0;
        for (int j : active) m = std::max(m, update(j));
        return m;
    }

    std::vector<int> active_set() const {
        std::vector<int> a;
        for (int j = 0; j < pr_.dim(); ++j)
            if (theta_(j) != 0.0) a.push_back(j);
        return a;
    }

    // Active-set Newton step. Solve the equality part of the optimality system
    // on the current active set with the current signs. If some sign flips,
    // move toward that solution only until the first coordinate reaches zero
    // (the signed quadratic decreases along the segment), drop it and retry.
    // A rank-deficient active set is reduced first: moving along a null
    // direction of the active Gram block leaves the fit unchanged, so we walk
    // in the direction that does not increase the penalty until a coordinate
    // reaches zero. Returns true once a sign-consistent solve is accepted.
    bool polish(std::vector<int> active) {
        while (!active.empty()) {
            const int k = static_cast<int>(active.size());
            Matrix G(k, k);
            Vector sgn(k);
            for (int a = 0; a < k; ++a) {
                sgn(a) = theta_(active[a]) > 0.0 ? 1.0 : -1.0;
                for (int b = 0; b < k; ++b) G(a, b) = pr_.gram(active[a], active[b]);
            }
            const double scale = G.diagonal().maxCoeff();
            Eigen::LLT<Matrix> llt(G);
            const bool full_rank = llt.info() == Eigen::Success &&
                                   Matrix(llt.matrixL()).diagonal().array().square().minCoeff() >= 1e-12 * scale;
            const bool moved = full_rank ? newton_step(active, llt, sgn) : drop_null_direction(active, G, sgn, scale);
            if (!moved) return false;
            if (full_rank && static_cast<int>(active.size()) == k) return true;
        }
        return false;
    }

    Vector take() { return std::move(theta_); }

private:
    // Leaves active unchanged on a full step, removes the blocking coordinate
    // on a partial one; false if nothing was accepted.
    bool newton_step(std::vector<int>& active, const Eigen::LLT<Matrix>& llt, const Vector& sgn) {
        const int k = static_cast<int>(active.size());
        Vector rhs(k);
        for (int a = 0; a < k; ++a) rhs(a) = pr_.corr(active[a]) - lambda_ * pr_.weights(active[a]) * sgn(a);
        const Vector sol = llt.solve(rhs);
        int hit = -1;
        double step = 1.0;
        for (int a = 0; a < k; ++a) {
            if (sol(a) * sgn(a) > 0.0) continue;
            const double cur = theta_(active[a]);
            const double t = cur / (cur - sol(a));
            if (t < step || hit < 0) {
                step = std::min(step, t);
                hit = a;
            }
        }
        Vector candidate = theta_;
        for (int a = 0; a < k; ++a) candidate(active[a]) += step * (sol(a) - theta_(active[a]));
        if (hit >= 0) candidate(active[hit]) = 0.0;
        if (!accept(std::move(candidate))) return false;
        if (hit >= 0) active.erase(active.begin() + hit);
        return true;
    }

    bool drop_null_direction(std::vector<int>& active, const Matrix& G, const Vector& sgn, double scale) {
        const Eigen::SelfAdjointEigenSolver<Matrix> es(G);
        if (es.info() != Eigen::Success || es.eigenvalues()(0) > 1e-10 * scale) return false;
        Vector v = es.eigenvectors().col(0);
        const int k = static_cast<int>(active.size());
        double slope = 0.0;
        for (int a = 0; a < k; ++a) slope += pr_.weights(active[a]) * sgn(a) * v(a);
        if (slope > 0.0) v = -v;
        int hit = -1;
        double step = std::numeric_limits<double>::infinity();
        for (int a = 0; a < k; ++a) {
            if (v(a) * sgn(a) >= 0.0) continue;
            const double t = std::abs(theta_(active[a]) / v(a));
            if (t < step) {
                step = t;
                hit = a;
            }
        }
        if (hit < 0) return false;
        Vector candidate = theta_;
        for (int a = 0; a < k; ++a) candidate(active[a]) += step * v(a);
        candidate(active[hit]) = 0.0;
        if (!accept(std::move(candidate))) return false;
        active.erase(active.begin() + hit);
        return true;
    }

    bool accept(Vector candidate) {
        const double now = pr_.objective(theta_, lambda_);
        if (pr_.objective(candidate, lambda_) > now + 1e-14 * std::max(1.0, std::abs(now))) return false;
        theta_ = std::move(candidate);
        grad_ = pr_.gradient(theta_);
        return true;
    }

    const PenalizedProblem& pr_;
    double lambda_;
    Vector theta_;
    Vector grad_;
};

}  // namespace

CdResult solve_weighted_l1(const PenalizedProblem& problem, double lambda, const Vector& warm_start,
                           const CdOptions& options) {
    const int p = problem.dim();
    if (!(lambda >= 0.0)) throw InputError("lambda must be nonnegative");
    Vector start = warm_start.size() == p ? warm_start : Vector::Zero(p);
    if (problem.nonnegative) start = start.cwiseMax(0.0);
    Solver solver(problem, lambda, std::move(start));

    const int cap = std::max(1, options.sweeps_per_coordinate * p);
    int sweeps = 0;
    while (true) {
        if (sweeps >= cap) throw MaxIterations(lambda, sweeps);
        ++sweeps;
        if (solver.full_sweep() < options.tol) break;

        std::vector<int> active = solver.active_set();
        // a failed polish on an unchanged set is retried after 1, 2, 4, ... sweeps
        int wait = 0, gap = 1;
        while (sweeps < cap) {
            ++sweeps;
            const double change = solver.active_sweep(active);
            if (change < options.tol) break;
            std::vector<int> now = solver.active_set();
            if (now != active) {
                wait = 0;
                gap = 1;
            } else if (options.polish && --wait <= 0) {
                if (solver.polish(active)) break;
                wait = gap;
                gap = std::min(2 * gap, 64);
            }
            active = std::move(now);
        }
    }
    CdResult out;
    out.sweeps = sweeps;
    out.theta = solver.take();
    return out;
}

}  // namespace twostep
