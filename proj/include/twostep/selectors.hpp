#pragma once

#include <optional>

#include "twostep/coordinate_descent.hpp"
#include "twostep/initial_estimators.hpp"
#include "twostep/path.hpp"

namespace twostep {

/// Initial coefficients below this magnitude drop out of the second stage.
inline constexpr double kZeroInitial = 1e-12;

struct GarroteSolution {
    Vector d;        // shrinkage factors, >= 0
    Vector beta_ng;  // beta_init .* d
    double lambda = 0.0;
    int sweeps = 0;
    double kkt_residual = 0.0;
};

/// Design Z = X diag(beta_init).
Matrix garrote_design(const Dataset& d, const Vector& beta_init);

double garrote_lambda_max(const Dataset& d, const InitialEstimate& init);
GarroteSolution garrote_fit(const Dataset& d, const InitialEstimate& init, double lambda,
                            const CdOptions& options = {});
PathSolution garrote_path(const Dataset& d, const InitialEstimate& init, const Vector& grid,
                          const CdOptions& options = {});

/// Penalty weights |beta_init_j|^{-gamma}; excluded coordinates get +inf.
Vector alasso_weights(const Vector& beta_init, double gamma);

double alasso_lambda_max(const Dataset& d, const InitialEstimate& init, double gamma = 1.0);

/// Weighted-l1 form. Throws AllWeightsInfinite for a zero initial estimate.
Vector alasso_fit(const Dataset& d, const InitialEstimate& init, double lambda, double gamma = 1.0,
                  const CdOptions& options = {});

/// gamma = 1 reparameterization: Lasso in d on Z = X diag(beta_init), beta = beta_init .* d.
/// Kept as an independent route for cross-checking alasso_fit.
Vector alasso_fit_dform(const Dataset& d, const InitialEstimate& init, double lambda,
                        const CdOptions& options = {});

PathSolution alasso_path(const Dataset& d, const InitialEstimate& init, const Vector& grid,
                         double gamma = 1.0, const CdOptions& options = {});

/// Keeps beta_j when |beta_j| >= lambda (equality kept).
Vector hard_threshold(const Vector& beta_init, double lambda);
inline Vector hard_threshold(const InitialEstimate& init, double lambda) { return hard_threshold(init.beta, lambda); }

/// One point above max |beta_j|, each distinct nonzero |beta_j| in descending
/// order, then half the smallest as the 0+ endpoint.
Vector hard_threshold_grid(const Vector& beta_init);
PathSolution hard_threshold_path(const Vector& beta_init, const Vector& grid);

struct OracleSelection {
    std::optional<double> lambda;
    int index = -1;
    bool success = false;
};

/// Largest lambda on the path whose sign pattern equals truth.
OracleSelection select_lambda_oracle(const PathSolution& path, const SignVector& truth);

}  // namespace twostep
