#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twostep/diagnostics.hpp"
#include "twostep/io.hpp"
#include "twostep/pipeline.hpp"
#include "twostep/simulation.hpp"

namespace twostep {

using json = nlohmann::json;

struct FitRequest {
    MethodSpec spec;
    std::optional<double> lambda;  // fixed lambda; k-fold CV when absent
    int cv_folds = 5;
    std::uint64_t seed = 1;
    bool standardized_output = false;  // report working-scale coefficients instead
};

struct FitReport {
    std::string method;
    std::optional<double> nu;
    std::optional<double> initial_lambda;
    double lambda = 0.0;
    double gamma = 1.0;
    std::string lambda_rule;  // "fixed" or "cvK"
    Vector coefficients;      // original scale unless standardized_scale
    double intercept = 0.0;   // working scale: the response center
    bool standardized_scale = false;
    SupportSet support;
    SignVector signs;
    std::optional<double> objective;     // working scale
    std::optional<double> kkt_residual;  // absent for hard-thresholding
    double wall_time_seconds = 0.0;
    std::optional<Vector> cv_error;
};

FitReport run_fit(const Dataset& d, const FitRequest& request);
json to_json(const FitReport& r);

json diagnose_json(const Dataset& d, const std::optional<Vector>& beta_star, bool want_eta);

// Selection experiments
TextTable selection_designs_table(const SelectionResult& r);
/// (eta_inf, method, success_rate) per design and method.
TextTable figure1_table(const SelectionResult& r);
/// One row per (p, s) with a success column per method (NaN marks not applicable).
/// Rows where no method exceeds min_success are dropped.
TextTable success_grid_table(const std::vector<SelectionResult>& results, double min_success = -1.0);
json selection_summary_json(const std::vector<SelectionResult>& results);

// Prediction experiments
TextTable prediction_replications_table(const PredictionResult& r);
std::vector<std::string> prediction_table_header();
/// Rows (example, method, median_rpe, rpe_se, median_tp, median_fp, failures).
TextTable prediction_summary_table(const std::vector<PredictionResult>& results);
json prediction_summary_json(const std::vector<PredictionResult>& results);

/// Writes JSON with a trailing newline and doubles at 17 significant digits.
void write_json(std::ostream& out, const json& j);
void write_json(const std::string& path, const json& j);

}  // namespace twostep
