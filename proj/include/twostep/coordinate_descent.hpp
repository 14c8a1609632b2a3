#pragma once

#include <limits>

#include "twostep/numerics.hpp"

namespace twostep {

inline constexpr double kExcluded = std::numeric_limits<double>::infinity();

// Weighted l1 least squares in Gram form:
//   min_theta (1/2n)||y - A theta||^2 + lambda * sum_j w_j |theta_j|
// optionally with theta >= 0. A coordinate with infinite weight is held at 0.
struct PenalizedProblem {
    Matrix gram;     // (1/n) A^T A
    Vector corr;     // (1/n) A^T y
    double half_ysq = 0.0;  // (1/2n) ||y||^2
    Vector weights;
    bool nonnegative = false;

    static PenalizedProblem build(const Matrix& A, const Vector& y, Vector weights, bool nonnegative);

    int dim() const noexcept { return static_cast<int>(corr.size()); }
    bool excluded(int j) const { return !(weights(j) < kExcluded); }

    double objective(const Vector& theta, double lambda) const;
    /// (1/n) A^T (y - A theta)
    Vector gradient(const Vector& theta) const;
    /// Largest violation of the optimality conditions at theta.
    double kkt_residual(const Vector& theta, double lambda) const;
    /// Smallest lambda at which theta = 0 is optimal.
    double lambda_max() const;
};

struct CdOptions {
    double tol = 1e-8;          // on the max absolute coordinate change in a sweep
    int sweeps_per_coordinate = 100;  // sweep cap = sweeps_per_coordinate * p
    bool polish = true;         // exact solve on a stable active set
};

struct CdResult {
    Vector theta;
    int sweeps = 0;
};

/// Cyclic coordinate descent with an active-set inner loop. Throws
/// MaxIterations(lambda) when the sweep cap is exhausted.
CdResult solve_weighted_l1(const PenalizedProblem& problem, double lambda, const Vector& warm_start,
                           const CdOptions& options = {});

}  // namespace twostep
