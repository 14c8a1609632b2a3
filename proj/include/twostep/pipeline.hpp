#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twostep/initial_estimators.hpp"
#include "twostep/selectors.hpp"

namespace twostep {

enum class SecondStep { lasso, garrote, alasso, hard_threshold };

std::string to_string(SecondStep s);
SecondStep parse_second_step(const std::string& name);

struct InitialSpec {
    InitialMethod method = InitialMethod::ridge;
    std::optional<double> nu;      // fixed ridge parameter; GCV when absent
    std::optional<double> lambda;  // fixed lasso parameter; CV when absent
    int lasso_cv_folds = 5;
    std::optional<Vector> fixed_beta;  // user-supplied, on the caller's scale
};

// A complete two-step recipe. SecondStep::lasso ignores the initial spec.
struct MethodSpec {
    SecondStep step = SecondStep::lasso;
    InitialSpec initial;
    double gamma = 1.0;
    bool standardize = true;
    int grid_size = kDefaultLambdaGridSize;
    double grid_ratio = kDefaultLambdaRatio;
    CdOptions cd;

    /// "Lasso", "NG-Ridge", "ALasso-Lasso", "HT-Univ", ...
    std::string label() const;
    bool needs_initial() const noexcept { return step != SecondStep::lasso; }
};

/// Inverse of MethodSpec::label (case-insensitive).
MethodSpec parse_method_label(const std::string& label);

InitialEstimate fit_initial(const Dataset& work, const InitialSpec& spec, std::uint64_t seed);

/// The method's default grid on working coordinates.
Vector second_step_grid(const Dataset& work, const InitialEstimate& init, const MethodSpec& spec);

/// Path on working coordinates (standardized when spec.standardize).
PathSolution second_step_path(const Dataset& work, const InitialEstimate& init, const MethodSpec& spec,
                              const Vector& grid);

struct MethodFit {
    MethodSpec spec;
    std::optional<Standardization> record;  // relative to the caller's dataset
    InitialEstimate initial;                // working coordinates
    PathSolution path;                      // working coordinates

    /// Coefficients and intercept on the caller's scale at path index i.
    LinearFit original(int i) const;
};

MethodFit fit_method_path(const Dataset& d, const MethodSpec& spec, const std::optional<Vector>& grid,
                          std::uint64_t seed);

/// k folds from a seeded shuffle cut into contiguous blocks (sizes differ by at most one).
std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t seed);

struct CvResult {
    double lambda = 0.0;
    int index = -1;
    Vector cv_error;  // mean validation MSE per grid point
    LinearFit fit;    // full-data fit at lambda, on the caller's scale
    MethodFit full;
};

/// k-fold CV over the grid (the full-data default grid when absent). Picks the
/// smallest mean validation MSE, ties toward the larger lambda.
CvResult select_lambda_cv(const Dataset& d, const MethodSpec& spec, const std::optional<Vector>& grid, int k,
                          std::uint64_t seed);

}  // namespace twostep
