#include "twostep/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "twostep/diagnostics.hpp"
#include "twostep/errors.hpp"

namespace twostep {

std::string to_string(CovarianceSpec::Kind k) {
    switch (k) {
        case CovarianceSpec::Kind::identity: return "identity";
        case CovarianceSpec::Kind::wishart: return "wishart";
        case CovarianceSpec::Kind::ar: return "ar";
        case CovarianceSpec::Kind::constant: return "constant";
        case CovarianceSpec::Kind::block_orthogonal: return "block_orthogonal";
    }
    return "?";
}

SymmetricMatrix sample_wishart(int p, double df, Rng& rng) {
    if (p < 1) throw InputError("wishart dimension must be >= 1");
    if (!(df >= p)) throw InputError("wishart needs df >= p");
    std::normal_distribution<double> z(0.0, 1.0);
    Matrix A = Matrix::Zero(p, p);
    for (int i = 0; i < p; ++i) {
        std::chi_squared_distribution<double> chi(df - i);
        A(i, i) = std::sqrt(chi(rng));
        for (int j = 0; j < i; ++j) A(i, j) = z(rng);
    }
    Matrix W = A * A.transpose();
    return SymmetricMatrix(0.5 * (W + W.transpose()));
}

Matrix covariance_matrix(const CovarianceSpec& spec, int p, Rng& rng) {
    Matrix S = Matrix::Identity(p, p);
    switch (spec.kind) {
        case CovarianceSpec::Kind::identity: break;
        case CovarianceSpec::Kind::wishart:
            return sample_wishart(p, spec.df > 0.0 ? spec.df : p, rng).matrix();
        case CovarianceSpec::Kind::ar:
            for (int j = 0; j < p; ++j)
                for (int k = 0; k < p; ++k) S(j, k) = std::pow(spec.rho, std::abs(j - k));
            break;
        case CovarianceSpec::Kind::constant:
            S.setConstant(spec.r);
            S.diagonal().setOnes();
            break;
        case CovarianceSpec::Kind::block_orthogonal:
            for (int j = 0; j < p; ++j)
                for (int k = 0; k < p; ++k) {
                    if (j == k) continue;
                    const bool same_block = (j < spec.a) == (k < spec.a);
                    S(j, k) = same_block ? spec.off_corr : 0.0;
                }
            break;
    }
    return S;
}

Matrix sample_design(int n, const Matrix& Sigma, Rng& rng) {
    const int p = static_cast<int>(Sigma.rows());
    Matrix F;
    Eigen::LLT<Matrix> llt(Sigma);
    bool ok = llt.info() == Eigen::Success;
    if (ok) {
        F = llt.matrixL();
        const double maxd = Sigma.diagonal().maxCoeff();
        ok = F.diagonal().array().square().minCoeff() >= 1e-12 * maxd;
    }
    if (!ok) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(Sigma);
        Vector ev = es.eigenvalues();
        const double top = std::max(ev.maxCoeff(), 0.0);
        for (int j = 0; j < p; ++j) ev(j) = ev(j) > 1e-12 * top ? std::sqrt(ev(j)) : 0.0;
        F = es.eigenvectors() * ev.asDiagonal();
    }
    return standard_normal_matrix(n, p, rng) * F.transpose();
}

TrueModel gen_beta(const BetaSpec& spec, int p, int s, double sigma2, Rng& rng) {
    if (s < 0 || s > p) throw SpecMismatch("need 0 <= s <= p");
    std::vector<double> values;
    switch (spec.kind) {
        case BetaSpec::Kind::fixed:
            if (static_cast<int>(spec.values.size()) != s)
                throw SpecMismatch("fixed beta lists " + std::to_string(spec.values.size()) + " values for s=" +
                                   std::to_string(s));
            values = spec.values;
            break;
        case BetaSpec::Kind::uniform: {
            std::uniform_real_distribution<double> mag(spec.low, spec.high);
            std::bernoulli_distribution coin(0.5);
            for (int k = 0; k < s; ++k) {
                const double m = mag(rng);
                values.push_back(coin(rng) ? m : -m);
            }
            break;
        }
        case BetaSpec::Kind::tiered: {
            if (spec.counts.size() != spec.values.size()) throw SpecMismatch("tier values and counts differ in length");
            for (std::size_t t = 0; t < spec.values.size(); ++t)
                for (int c = 0; c < spec.counts[t]; ++c) values.push_back(spec.values[t]);
            if (static_cast<int>(values.size()) != s)
                throw SpecMismatch("tier counts sum to " + std::to_string(values.size()) + ", expected s=" +
                                   std::to_string(s));
            break;
        }
    }

    std::vector<int> where;
    switch (spec.placement) {
        case BetaSpec::Placement::first:
            for (int j = 0; j < s; ++j) where.push_back(j);
            break;
        case BetaSpec::Placement::random: {
            std::vector<int> all(p);
            std::iota(all.begin(), all.end(), 0);
            std::shuffle(all.begin(), all.end(), rng);
            where.assign(all.begin(), all.begin() + s);
            std::sort(where.begin(), where.end());
            std::shuffle(values.begin(), values.end(), rng);
            break;
        }
        case BetaSpec::Placement::indices:
            if (static_cast<int>(spec.positions.size()) != s) throw SpecMismatch("positions must list s indices");
            where = spec.positions;
            break;
    }

    Vector beta = Vector::Zero(p);
    for (int k = 0; k < s; ++k) {
        if (where[k] < 0 || where[k] >= p) throw SpecMismatch("beta position out of range");
        if (values[k] == 0.0) throw SpecMismatch("nonzero coefficient values must be nonzero");
        beta(where[k]) = values[k];
    }
    TrueModel m = TrueModel::from_beta(std::move(beta), sigma2);
    if (m.s != s) throw SpecMismatch("beta positions collide");
    return m;
}

double rpe(const Vector& beta_hat, const Vector& beta_star, const Matrix& X_test, double sigma2) {
    if (!(sigma2 > 0.0)) throw InputError("sigma2 must be positive");
    if (beta_hat.size() != beta_star.size() || X_test.cols() != beta_hat.size())
        throw InputError("rpe: dimension mismatch");
    const Vector diff = X_test * (beta_hat - beta_star);
    return diff.squaredNorm() / static_cast<double>(X_test.rows()) / sigma2;
}

std::pair<int, int> tp_fp(const Vector& beta_hat, const SupportSet& S, double eps) {
    int tp = 0, fp = 0;
    for (Eigen::Index j = 0; j < beta_hat.size(); ++j) {
        if (!(std::abs(beta_hat(j)) > eps)) continue;
        if (S.contains(static_cast<int>(j))) ++tp;
        else ++fp;
    }
    return {tp, fp};
}

double eta_infinity_population(const Matrix& Sigma, const SupportSet& S, const SignVector& signs_on_S) {
    const Vector inv_sd = Sigma.diagonal().cwiseSqrt().cwiseInverse();
    const Matrix R = inv_sd.asDiagonal() * Sigma * inv_sd.asDiagonal();
    const Matrix RSS = select_columns(Matrix(select_columns(R, S.indices()).transpose()), S.indices());
    const std::vector<int> Sc = S.complement().indices();
    if (Sc.empty()) return 1.0;
    const Matrix RScS = select_columns(Matrix(select_columns(R, S.indices()).transpose()), Sc).transpose();
    const Vector v = solve_spd(SymmetricMatrix(RSS), signs_on_S.as_vector());
    return 1.0 - inf_norm(Vector(RScS * v));
}

std::vector<MethodSpec> ExperimentConfig::method_specs() const {
    std::vector<MethodSpec> out;
    for (const auto& label : methods) {
        MethodSpec m = parse_method_label(label);
        m.grid_size = grid_size;
        m.initial.lasso_cv_folds = cv_folds;
        out.push_back(m);
    }
    return out;
}

std::vector<std::string> ExperimentConfig::problems() const {
    std::vector<std::string> bad;
    if (n < 2) bad.push_back("n: must be >= 2");
    if (p < 1) bad.push_back("p: must be >= 1");
    if (s < 0 || s > p) bad.push_back("s: must satisfy 0 <= s <= p");
    if (!(sigma2 > 0.0)) bad.push_back("sigma2: must be positive");
    if (outer < 1) bad.push_back("replications.outer: must be >= 1");
    if (inner < 1) bad.push_back("replications.inner: must be >= 1");
    if (methods.empty()) bad.push_back("methods: must list at least one method");
    for (const auto& label : methods) {
        try {
            parse_method_label(label);
        } catch (const Error&) {
            bad.push_back("methods: unknown method '" + label + "'");
        }
    }
    if (grid_size < 2) bad.push_back("grid_size: must be >= 2");
    if (lambda_rule == LambdaRule::cv && (cv_folds < 2 || cv_folds > n)) bad.push_back("cv_folds: must lie in [2, n]");
    if (kind == ExperimentKind::prediction) {
        if (lambda_rule != LambdaRule::cv) bad.push_back("lambda_rule: prediction experiments need cv");
        if (n_test < 1) bad.push_back("n_test: must be >= 1");
        if (bootstrap < 1) bad.push_back("bootstrap: must be >= 1");
    }
    switch (covariance.kind) {
        case CovarianceSpec::Kind::wishart:
            if (covariance.df != 0.0 && covariance.df < p) bad.push_back("covariance.df: must be >= p");
            break;
        case CovarianceSpec::Kind::ar:
            if (!(covariance.rho > -1.0 && covariance.rho < 1.0)) bad.push_back("covariance.rho: must lie in (-1, 1)");
            break;
        case CovarianceSpec::Kind::constant:
            if (!(covariance.r < 1.0 && (p == 1 || covariance.r > -1.0 / (p - 1))))
                bad.push_back("covariance.r: must lie in (-1/(p-1), 1)");
            break;
        case CovarianceSpec::Kind::block_orthogonal:
            if (covariance.a < 1 || covariance.a > p) bad.push_back("covariance.a: must lie in [1, p]");
            if (!(covariance.off_corr < 1.0 && covariance.off_corr > -1.0 / std::max(1, p - 1)))
                bad.push_back("covariance.off_corr: must keep Sigma positive definite");
            break;
        case CovarianceSpec::Kind::identity: break;
    }
    switch (beta.kind) {
        case BetaSpec::Kind::fixed:
            if (static_cast<int>(beta.values.size()) != s) bad.push_back("beta.values: must list exactly s values");
            break;
        case BetaSpec::Kind::tiered: {
            if (beta.values.size() != beta.counts.size()) bad.push_back("beta.counts: must match beta.values in length");
            const int total = std::accumulate(beta.counts.begin(), beta.counts.end(), 0);
            if (total != s) bad.push_back("beta.counts: must sum to s");
            break;
        }
        case BetaSpec::Kind::uniform:
            if (!(beta.low > 0.0 && beta.high >= beta.low)) bad.push_back("beta.low/high: need 0 < low <= high");
            break;
    }
    if (beta.placement == BetaSpec::Placement::indices && static_cast<int>(beta.positions.size()) != s)
        bad.push_back("beta.positions: must list exactly s indices");
    return bad;
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

int default_workers() {
    if (const char* env = std::getenv("TWOSTEP_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

namespace {

void require_valid(const ExperimentConfig& cfg) {
    const auto bad = cfg.problems();
    if (bad.empty()) return;
    std::string msg = "invalid experiment config:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw InputError(msg);
}

// Stream coordinates: the cell (p, s) is part of every coordinate so cells of
// a grid can run in any order.
constexpr std::uint64_t kDesignTag = 0x44455349u;
constexpr std::uint64_t kDrawTag = 0x44524157u;
constexpr std::uint64_t kFitTag = 0x46495421u;
constexpr std::uint64_t kBootTag = 0x424f4f54u;

struct DesignDraw {
    Matrix Sigma;
    TrueModel truth;
    Matrix X;  // only when the design is fixed across noise draws
    double eta_inf = std::numeric_limits<double>::quiet_NaN();
    double condition = std::numeric_limits<double>::quiet_NaN();
};

// lambda_max / lambda_min of Sigma; +inf when singular
double condition_number(const Matrix& Sigma) {
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(Sigma, Eigen::EigenvaluesOnly).eigenvalues();
    if (ev.size() == 0) return std::numeric_limits<double>::quiet_NaN();
    return ev(0) > 0.0 ? ev(ev.size() - 1) / ev(0) : std::numeric_limits<double>::infinity();
}

double safe_eta(const std::function<double()>& f) {
    try {
        return f();
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

bool method_not_applicable(const MethodSpec& m, const ExperimentConfig& cfg) {
    return m.needs_initial() && m.initial.method == InitialMethod::ols && cfg.p > cfg.n;
}

}  // namespace

SelectionResult run_selection_experiment(const ExperimentConfig& cfg, int workers) {
    require_valid(cfg);
    const auto specs = cfg.method_specs();
    const int nm = static_cast<int>(specs.size());
    const std::uint64_t cell_p = static_cast<std::uint64_t>(cfg.p), cell_s = static_cast<std::uint64_t>(cfg.s);

    std::vector<DesignDraw> designs(cfg.outer);
    parallel_for(cfg.outer, workers, [&](int g) {
        Rng rng = make_stream(cfg.seed, {kDesignTag, cell_p, cell_s, static_cast<std::uint64_t>(g)});
        DesignDraw& dd = designs[g];
        dd.Sigma = covariance_matrix(cfg.covariance, cfg.p, rng);
        dd.truth = gen_beta(cfg.beta, cfg.p, cfg.s, cfg.sigma2, rng);
        dd.condition = condition_number(dd.Sigma);
        const SupportSet& S = dd.truth.support;
        const SignVector signs = sign_pattern(dd.truth.beta_star, 0.0).restricted(S);
        if (!cfg.inner_resamples_design) {
            dd.X = sample_design(cfg.n, dd.Sigma, rng);
            if (!S.empty()) {
                dd.eta_inf = safe_eta([&] {
                    const Dataset std_design = standardize(Dataset{dd.X, Vector::Zero(cfg.n), std::nullopt});
                    return eta_infinity(std_design, S, signs);
                });
            }
        } else if (!S.empty()) {
            dd.eta_inf = safe_eta([&] { return eta_infinity_population(dd.Sigma, S, signs); });
        }
    });

    // outcome: 1 success, 0 miss, -1 fit failure, -2 not applicable
    const int units = cfg.outer * cfg.inner;
    std::vector<std::int8_t> outcome(static_cast<std::size_t>(units) * nm, 0);
    parallel_for(units, workers, [&](int u) {
        const int g = u / cfg.inner, r = u % cfg.inner;
        const DesignDraw& dd = designs[g];
        Rng rng = make_stream(cfg.seed, {kDrawTag, cell_p, cell_s, static_cast<std::uint64_t>(g),
                                         static_cast<std::uint64_t>(r)});
        const Matrix X = cfg.inner_resamples_design ? sample_design(cfg.n, dd.Sigma, rng) : dd.X;
        const Vector eps = std::sqrt(cfg.sigma2) * standard_normal_vector(cfg.n, rng);
        const Dataset d{X, X * dd.truth.beta_star + eps, std::nullopt};
        const SignVector truth = sign_pattern(dd.truth.beta_star, 0.0);
        for (int m = 0; m < nm; ++m) {
            std::int8_t& slot = outcome[static_cast<std::size_t>(u) * nm + m];
            if (method_not_applicable(specs[m], cfg)) {
                slot = -2;
                continue;
            }
            try {
                const std::uint64_t fit_seed = derive_seed(cfg.seed, {kFitTag, cell_p, cell_s, static_cast<std::uint64_t>(g),
                                                                      static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(m)});
                const MethodFit fit = fit_method_path(d, specs[m], std::nullopt, fit_seed);
                slot = select_lambda_oracle(fit.path, truth).success ? 1 : 0;
            } catch (const Error&) {
                slot = -1;
            }
        }
    });

    SelectionResult res;
    res.config = cfg;
    std::vector<MetricsRecord> totals(nm);
    for (int m = 0; m < nm; ++m) {
        totals[m].method = specs[m].label();
        totals[m].eta_inf = std::numeric_limits<double>::quiet_NaN();
        totals[m].sigma_condition = std::numeric_limits<double>::quiet_NaN();
    }
    for (int g = 0; g < cfg.outer; ++g) {
        for (int m = 0; m < nm; ++m) {
            MetricsRecord rec;
            rec.design = g;
            rec.method = specs[m].label();
            rec.eta_inf = designs[g].eta_inf;
            rec.sigma_condition = designs[g].condition;
            for (int r = 0; r < cfg.inner; ++r) {
                const int o = outcome[static_cast<std::size_t>(g * cfg.inner + r) * nm + m];
                if (o == -2) rec.not_applicable = true;
                else if (o == -1) ++rec.failures;
                else {
                    ++rec.valid;
                    rec.successes += o;
                }
            }
            const int attempted = rec.valid + rec.failures;
            rec.success_rate = attempted > 0 ? static_cast<double>(rec.successes) / attempted : 0.0;
            totals[m].successes += rec.successes;
            totals[m].valid += rec.valid;
            totals[m].failures += rec.failures;
            totals[m].not_applicable = totals[m].not_applicable || rec.not_applicable;
            res.per_design.push_back(std::move(rec));
        }
    }
    for (auto& t : totals) {
        const int attempted = t.valid + t.failures;
        t.success_rate = attempted > 0 ? static_cast<double>(t.successes) / attempted : 0.0;
    }
    res.overall = std::move(totals);
    return res;
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t k = values.size() / 2;
    return values.size() % 2 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

double bootstrap_median_se(const std::vector<double>& values, int resamples, Rng& rng) {
    if (values.empty() || resamples < 1) return std::numeric_limits<double>::quiet_NaN();
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    std::vector<double> meds(resamples), draw(values.size());
    for (int b = 0; b < resamples; ++b) {
        for (auto& v : draw) v = values[pick(rng)];
        meds[b] = median(draw);
    }
    const double mean = std::accumulate(meds.begin(), meds.end(), 0.0) / resamples;
    double ss = 0.0;
    for (double m : meds) ss += (m - mean) * (m - mean);
    return resamples > 1 ? std::sqrt(ss / (resamples - 1)) : 0.0;
}

PredictionResult run_prediction_experiment(const ExperimentConfig& cfg, int workers) {
    require_valid(cfg);
    const auto specs = cfg.method_specs();
    const int nm = static_cast<int>(specs.size());
    const std::uint64_t cell_p = static_cast<std::uint64_t>(cfg.p), cell_s = static_cast<std::uint64_t>(cfg.s);

    Matrix fixed_sigma;
    if (!cfg.covariance.random()) {
        Rng unused = make_stream(cfg.seed, {kDesignTag, cell_p, cell_s});
        fixed_sigma = covariance_matrix(cfg.covariance, cfg.p, unused);
    }

    std::vector<ReplicationMetrics> reps(static_cast<std::size_t>(cfg.outer) * nm);
    parallel_for(cfg.outer, workers, [&](int r) {
        Rng rng = make_stream(cfg.seed, {kDrawTag, cell_p, cell_s, static_cast<std::uint64_t>(r)});
        const Matrix Sigma = cfg.covariance.random() ? covariance_matrix(cfg.covariance, cfg.p, rng) : fixed_sigma;
        const TrueModel truth = gen_beta(cfg.beta, cfg.p, cfg.s, cfg.sigma2, rng);
        const Matrix X = sample_design(cfg.n, Sigma, rng);
        const Vector eps = std::sqrt(cfg.sigma2) * standard_normal_vector(cfg.n, rng);
        const Matrix X_test = sample_design(cfg.n_test, Sigma, rng);
        const Dataset d{X, X * truth.beta_star + eps, std::nullopt};
        for (int m = 0; m < nm; ++m) {
            ReplicationMetrics& out = reps[static_cast<std::size_t>(r) * nm + m];
            out.replication = r;
            out.method = specs[m].label();
            if (method_not_applicable(specs[m], cfg)) {
                out.failed = true;
                continue;
            }
            try {
                const std::uint64_t fit_seed = derive_seed(cfg.seed, {kFitTag, cell_p, cell_s, static_cast<std::uint64_t>(r),
                                                                      static_cast<std::uint64_t>(m)});
                const CvResult cv = select_lambda_cv(d, specs[m], std::nullopt, cfg.cv_folds, fit_seed);
                out.lambda = cv.lambda;
                out.rpe = rpe(cv.fit.beta, truth.beta_star, X_test, cfg.sigma2);
                const auto [tp, fp] = tp_fp(cv.full.path.coefficients[cv.index], truth.support);
                out.tp = tp;
                out.fp = fp;
            } catch (const Error&) {
                out.failed = true;
            }
        }
    });

    PredictionResult res;
    res.config = cfg;
    res.replications = reps;
    for (int m = 0; m < nm; ++m) {
        PredictionSummary sum;
        sum.method = specs[m].label();
        std::vector<double> rpes, tps, fps;
        for (int r = 0; r < cfg.outer; ++r) {
            const auto& rm = reps[static_cast<std::size_t>(r) * nm + m];
            if (rm.failed) {
                ++sum.failures;
                continue;
            }
            rpes.push_back(rm.rpe);
            tps.push_back(rm.tp);
            fps.push_back(rm.fp);
        }
        sum.replications = static_cast<int>(rpes.size());
        sum.median_rpe = median(rpes);
        sum.median_tp = median(tps);
        sum.median_fp = median(fps);
        Rng boot = make_stream(cfg.seed, {kBootTag, cell_p, cell_s, static_cast<std::uint64_t>(m)});
        sum.rpe_se = bootstrap_median_se(rpes, cfg.bootstrap, boot);
        res.summary.push_back(sum);
    }
    return res;
}

NormalityResult run_alasso_normality(const NormalityCheck& cfg) {
    if (cfg.s < 1 || cfg.s > cfg.p || cfg.p > cfg.n) throw InputError("normality check needs 1 <= s <= p <= n");
    Rng design_rng = make_stream(cfg.seed, {kDesignTag});
    const Matrix X0 = sample_design(cfg.n, Matrix::Identity(cfg.p, cfg.p), design_rng);
    const Dataset design = standardize(Dataset{X0, Vector::Zero(cfg.n), std::nullopt});
    const Matrix& X = design.X;

    Vector beta = Vector::Zero(cfg.p);
    const double pattern[] = {2.0, -1.5, 1.0};
    for (int j = 0; j < cfg.s; ++j) beta(j) = pattern[j % 3];
    const TrueModel truth = TrueModel::from_beta(beta, cfg.sigma2);
    const Vector v = Vector::Ones(cfg.s) / std::sqrt(static_cast<double>(cfg.s));

    NormalityResult res;
    res.lambda = std::pow(static_cast<double>(cfg.n), -cfg.lambda_exponent);
    res.w2 = oracle_variance(Dataset{X, Vector::Zero(cfg.n), std::nullopt}, truth.support, cfg.sigma2, v);
    const double scale = std::sqrt(static_cast<double>(cfg.n) / res.w2);
    const Vector bS = select_entries(beta, truth.support.indices());

    res.statistics.resize(cfg.replications);
    for (int r = 0; r < cfg.replications; ++r) {
        Rng rng = make_stream(cfg.seed, {kDrawTag, static_cast<std::uint64_t>(r)});
        const Vector eps = std::sqrt(cfg.sigma2) * standard_normal_vector(cfg.n, rng);
        const Dataset d{X, X * beta + eps, std::nullopt};
        const InitialEstimate init = fit_ols(d);
        const Vector fit = alasso_fit(d, init, res.lambda, 1.0);
        res.statistics[r] = scale * v.dot(select_entries(fit, truth.support.indices()) - bS);
    }
    const double n = static_cast<double>(cfg.replications);
    res.mean = std::accumulate(res.statistics.begin(), res.statistics.end(), 0.0) / n;
    double ss = 0.0;
    for (double t : res.statistics) ss += (t - res.mean) * (t - res.mean);
    res.variance = ss / (n - 1.0);
    return res;
}

}  // namespace twostep
