#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twostep/data_model.hpp"
#include "twostep/pipeline.hpp"
#include "twostep/rng.hpp"

namespace twostep {

struct CovarianceSpec {
    enum class Kind { identity, wishart, ar, constant, block_orthogonal };
    Kind kind = Kind::identity;
    double df = 0.0;        // wishart; 0 means df = p
    double rho = 0.0;       // ar: Sigma_jk = rho^|j-k|
    double r = 0.0;         // constant: Sigma_jk = r off the diagonal
    int a = 0;              // block_orthogonal: first a columns form block A
    double off_corr = 0.6;  // block_orthogonal: correlation inside each block

    bool random() const noexcept { return kind == Kind::wishart; }
};

std::string to_string(CovarianceSpec::Kind k);

/// Bartlett decomposition with identity scale: W = A A^T, A lower triangular,
/// A_ii^2 ~ chi^2(df - i), A_ij ~ N(0,1) below the diagonal.
SymmetricMatrix sample_wishart(int p, double df, Rng& rng);

/// Population covariance for the deterministic kinds; wishart draws from rng.
Matrix covariance_matrix(const CovarianceSpec& spec, int p, Rng& rng);

/// Rows iid N(0, Sigma). Cholesky, or a clipped eigen factor when Sigma is
/// only semidefinite.
Matrix sample_design(int n, const Matrix& Sigma, Rng& rng);

struct BetaSpec {
    enum class Kind { fixed, uniform, tiered };
    enum class Placement { first, random, indices };
    Kind kind = Kind::fixed;
    std::vector<double> values;  // fixed: the s nonzero values; tiered: tier values
    std::vector<int> counts;     // tiered: multiplicity of each tier value
    double low = 0.5, high = 2.0;  // uniform magnitudes; sign is a fair coin
    Placement placement = Placement::first;
    std::vector<int> positions;  // Placement::indices
};

TrueModel gen_beta(const BetaSpec& spec, int p, int s, double sigma2, Rng& rng);

/// Mean over test rows of (x_i^T (beta_hat - beta*))^2 / sigma2.
double rpe(const Vector& beta_hat, const Vector& beta_star, const Matrix& X_test, double sigma2);

/// (#{j in S : |b_j| > eps}, #{j not in S : |b_j| > eps}).
std::pair<int, int> tp_fp(const Vector& beta_hat, const SupportSet& S, double eps = kSupportEps);

/// eta_inf of the population correlation matrix of Sigma.
double eta_infinity_population(const Matrix& Sigma, const SupportSet& S, const SignVector& signs_on_S);

enum class ExperimentKind { selection, prediction };
enum class LambdaRule { oracle, cv };

struct ExperimentConfig {
    std::string name = "experiment";
    ExperimentKind kind = ExperimentKind::selection;
    int n = 100, p = 32, s = 5;
    CovarianceSpec covariance;
    BetaSpec beta;
    double sigma2 = 1.0;
    int outer = 1;  // selection: designs (Sigma, beta*); prediction: replications
    int inner = 1;  // selection: noise draws per design; unused for prediction
    bool inner_resamples_design = false;  // selection: redraw X with every noise draw
    std::vector<std::string> methods{"Lasso"};
    LambdaRule lambda_rule = LambdaRule::oracle;
    int cv_folds = 5;
    int n_test = 1000;
    int grid_size = kDefaultLambdaGridSize;
    int bootstrap = 200;
    std::uint64_t seed = 1;

    std::vector<MethodSpec> method_specs() const;
    /// Every offending field, empty when valid.
    std::vector<std::string> problems() const;
};

/// Runs fn(i) for i in [0, count) on `workers` threads. Results must be
/// written to per-index slots; ordering of calls is unspecified.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

/// TWOSTEP_WORKERS when set and positive, else 1.
int default_workers();

struct MetricsRecord {
    int design = -1;  // -1 for aggregates
    std::string method;
    double eta_inf = 0.0;
    double sigma_condition = 0.0;  // of the design's population covariance
    double success_rate = 0.0;
    int successes = 0;
    int valid = 0;
    int failures = 0;
    bool not_applicable = false;  // e.g. OLS initial estimate with p > n
};

struct SelectionResult {
    ExperimentConfig config;
    std::vector<MetricsRecord> per_design;  // design-major, methods in config order
    std::vector<MetricsRecord> overall;     // one per method
};

SelectionResult run_selection_experiment(const ExperimentConfig& cfg, int workers = 1);

struct ReplicationMetrics {
    int replication = 0;
    std::string method;
    double rpe = 0.0;
    int tp = 0, fp = 0;
    double lambda = 0.0;
    bool failed = false;
};

struct PredictionSummary {
    std::string method;
    double median_rpe = 0.0;
    double rpe_se = 0.0;  // bootstrap SE of the median
    double median_tp = 0.0;
    double median_fp = 0.0;
    int replications = 0;
    int failures = 0;
};

struct PredictionResult {
    ExperimentConfig config;
    std::vector<ReplicationMetrics> replications;  // replication-major
    std::vector<PredictionSummary> summary;
};

PredictionResult run_prediction_experiment(const ExperimentConfig& cfg, int workers = 1);

double median(std::vector<double> values);

/// SD of `resamples` bootstrap medians of values.
double bootstrap_median_se(const std::vector<double>& values, int resamples, Rng& rng);

struct NormalityCheck {
    int n = 400, p = 10, s = 3;
    double sigma2 = 1.0;
    int replications = 2000;
    double lambda_exponent = 1.0;  // lambda = n^{-lambda_exponent}
    std::uint64_t seed = 2024;
};

struct NormalityResult {
    std::vector<double> statistics;  // sqrt(n) w^{-1} v^T (beta_S - beta*_S)
    double mean = 0.0;
    double variance = 0.0;
    double lambda = 0.0;
    double w2 = 0.0;
};

/// Adaptive Lasso (OLS initial, gamma = 1) on one fixed standardized design
/// with fresh noise per replication.
NormalityResult run_alasso_normality(const NormalityCheck& cfg);

}  // namespace twostep
