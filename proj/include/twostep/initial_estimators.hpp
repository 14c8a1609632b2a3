#pragma once

#include <optional>
#include <string>

#include "twostep/coordinate_descent.hpp"
#include "twostep/data_model.hpp"
#include "twostep/path.hpp"

namespace twostep {

enum class InitialMethod { ols, univariate, ridge, lasso };

std::string to_string(InitialMethod m);
InitialMethod parse_initial_method(const std::string& name);

struct InitialEstimate {
    Vector beta;
    InitialMethod method = InitialMethod::ols;
    std::optional<double> tuning;  // nu for ridge, lambda for lasso
    std::optional<double> gcv;
    int iterations = 0;
};

InitialEstimate fit_ols(const Dataset& d);

/// Marginal slopes (1/n) x_j^T y. Meant for standardized columns.
InitialEstimate fit_univariate(const Dataset& d);

/// Minimizer of (1/n)||y - X b||^2 + nu ||b||^2.
InitialEstimate fit_ridge(const Dataset& d, double nu);

struct GcvSelection {
    double nu = 0.0;
    InitialEstimate estimate;
    Vector scores;  // GCV(nu) per grid point; +inf where undefined
};

inline constexpr int kDefaultNuGridSize = 50;
Vector default_nu_grid();

/// Ridge with nu picked by generalized cross-validation over the grid; ties go
/// to the larger nu. Uses one thin SVD of X for the whole grid.
GcvSelection select_ridge_gcv(const Dataset& d, const Vector& grid = default_nu_grid());

inline constexpr int kDefaultLambdaGridSize = 100;
inline constexpr double kDefaultLambdaRatio = 1e-3;

double lasso_lambda_max(const Dataset& d);

/// 100 log-spaced points from lambda_max down to 1e-3 lambda_max. A zero
/// lambda_max (y orthogonal to every column) falls back to a unit scale.
Vector default_lambda_grid(double lambda_max, int size = kDefaultLambdaGridSize,
                           double ratio = kDefaultLambdaRatio);

/// Pathwise coordinate descent for the Lasso, warm-started along the grid.
PathSolution lasso_path(const Dataset& d, const Vector& grid, const CdOptions& options = {});

/// Single-lambda Lasso fit, packaged as an initial estimate.
InitialEstimate fit_lasso(const Dataset& d, double lambda, const CdOptions& options = {});

}  // namespace twostep
