#include "twostep/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "twostep/config.hpp"
#include "twostep/coordinate_descent.hpp"
#include "twostep/errors.hpp"

namespace twostep {

namespace {

json vec_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Objective and KKT residual of the second-step problem at beta (working scale).
std::pair<double, std::optional<double>> assess(const Dataset& work, const MethodFit& fit, int index) {
    const Vector& beta = fit.path.coefficients.at(static_cast<std::size_t>(index));
    const double lambda = fit.path.lambdas(index);
    const MethodSpec& spec = fit.spec;
    switch (spec.step) {
        case SecondStep::lasso: {
            const auto pr = PenalizedProblem::build(work.X, work.y, Vector::Ones(work.p()), false);
            return {pr.objective(beta, lambda), pr.kkt_residual(beta, lambda)};
        }
        case SecondStep::alasso: {
            const Vector& b0 = fit.initial.beta;
            if (b0.cwiseAbs().maxCoeff() < kZeroInitial) {
                return {0.5 * work.y.squaredNorm() / work.n(), 0.0};
            }
            const auto pr = PenalizedProblem::build(work.X, work.y, alasso_weights(b0, spec.gamma), false);
            return {pr.objective(beta, lambda), pr.kkt_residual(beta, lambda)};
        }
        case SecondStep::garrote: {
            const Vector& b0 = fit.initial.beta;
            Vector w(work.p()), d = Vector::Zero(work.p());
            for (int j = 0; j < work.p(); ++j) {
                const bool out = std::abs(b0(j)) < kZeroInitial;
                w(j) = out ? kExcluded : 1.0;
                if (!out) d(j) = beta(j) / b0(j);
            }
            const auto pr = PenalizedProblem::build(garrote_design(work, b0), work.y, w, true);
            return {pr.objective(d, lambda), pr.kkt_residual(d, lambda)};
        }
        case SecondStep::hard_threshold:
            return {0.5 * (work.y - work.X * beta).squaredNorm() / work.n(), std::nullopt};
    }
    throw InputError("unhandled second step");
}

}  // namespace

FitReport run_fit(const Dataset& d, const FitRequest& request) {
    const auto start = std::chrono::steady_clock::now();
    d.validate();
    FitReport r;
    MethodFit fit;
    int index = 0;
    if (request.lambda) {
        if (!(*request.lambda > 0.0)) throw InputError("lambda must be positive");
        Vector grid(1);
        grid << *request.lambda;
        fit = fit_method_path(d, request.spec, grid, request.seed);
        r.lambda_rule = "fixed";
    } else {
        CvResult cv = select_lambda_cv(d, request.spec, std::nullopt, request.cv_folds, request.seed);
        fit = std::move(cv.full);
        index = cv.index;
        r.cv_error = cv.cv_error;
        r.lambda_rule = "cv" + std::to_string(request.cv_folds);
    }
    r.method = request.spec.label();
    r.gamma = request.spec.gamma;
    if (request.spec.needs_initial() && !request.spec.initial.fixed_beta) {
        if (fit.initial.method == InitialMethod::ridge) r.nu = fit.initial.tuning;
        if (fit.initial.method == InitialMethod::lasso) r.initial_lambda = fit.initial.tuning;
    }
    r.lambda = fit.path.lambdas(index);
    const LinearFit lf = fit.original(index);
    r.coefficients = lf.beta;
    r.intercept = lf.intercept;
    r.support = fit.path.supports.at(static_cast<std::size_t>(index));
    r.signs = fit.path.signs.at(static_cast<std::size_t>(index));

    const Dataset work = request.spec.standardize ? standardize(Dataset{d.X, d.y, std::nullopt})
                                                  : Dataset{d.X, d.y, std::nullopt};
    const auto [objective, kkt] = assess(work, fit, index);
    r.objective = objective;
    r.kkt_residual = kkt;
    if (request.standardized_output) {
        r.coefficients = fit.path.coefficients.at(static_cast<std::size_t>(index));
        r.intercept = fit.record ? fit.record->y_center : 0.0;
        r.standardized_scale = true;
    }
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

json to_json(const FitReport& r) {
    json signs = json::array();
    for (auto s : r.signs.entries()) signs.push_back(static_cast<int>(s));
    json j = {{"method", r.method},
              {"lambda_rule", r.lambda_rule},
              {"lambda", r.lambda},
              {"gamma", r.gamma},
              {"nu", opt_json(r.nu)},
              {"initial_lambda", opt_json(r.initial_lambda)},
              {"intercept", r.intercept},
              {"coefficients", vec_json(r.coefficients)},
              {"support", r.support.indices()},
              {"signs", signs},
              {"objective", opt_json(r.objective)},
              {"kkt_residual", opt_json(r.kkt_residual)},
              {"wall_time_seconds", r.wall_time_seconds}};
    j["coefficient_scale"] = r.standardized_scale ? "standardized" : "original";
    if (r.cv_error) j["cv_error"] = vec_json(*r.cv_error);
    return j;
}

json diagnose_json(const Dataset& d, const std::optional<Vector>& beta_star, bool want_eta) {
    if (want_eta && !beta_star) throw InputError("eta_inf needs the true coefficient vector (--beta)");
    if (beta_star && beta_star->size() != d.X.cols())
        throw InputError("beta has length " + std::to_string(beta_star->size()) + ", design has " +
                         std::to_string(d.X.cols()) + " columns");
    json j = {{"n", d.X.rows()}, {"p", d.X.cols()}};
    if (beta_star) {
        const DesignDiagnostics dd = design_diagnostics(d, *beta_star);
        j["design"] = {{"eta_inf", dd.eta_inf},
                       {"c_max", dd.c_max},
                       {"lambda_min", dd.lambda_min},
                       {"rho_n", dd.rho_n},
                       {"max_row_norm", dd.max_row_norm},
                       {"support", support_of(*beta_star, 0.0).indices()}};
    } else {
        j["design"] = nullptr;
    }
    const Assumption2Report a2 = assumption2_report(d, beta_star);
    j["assumption2"] = {{"q", a2.q},
                        {"singular_values", vec_json(a2.singular_values)},
                        {"xi_hat", opt_json(a2.xi_hat)},
                        {"theta", beta_star ? vec_json(a2.theta) : json(nullptr)}};
    return j;
}

TextTable selection_designs_table(const SelectionResult& r) {
    TextTable t;
    t.header = {"design", "eta_inf", "sigma_condition", "method", "success_rate", "successes", "valid", "failures",
                "not_applicable"};
    for (const auto& m : r.per_design)
        t.rows.push_back({std::to_string(m.design), format_double(m.eta_inf), format_double(m.sigma_condition), m.method,
                          m.not_applicable ? "NA" : format_double(m.success_rate), std::to_string(m.successes),
                          std::to_string(m.valid), std::to_string(m.failures), m.not_applicable ? "1" : "0"});
    return t;
}

TextTable figure1_table(const SelectionResult& r) {
    TextTable t;
    t.header = {"design", "eta_inf", "method", "success_rate"};
    for (const auto& m : r.per_design)
        t.rows.push_back({std::to_string(m.design), format_double(m.eta_inf), m.method,
                          m.not_applicable ? "NA" : format_double(m.success_rate)});
    return t;
}

TextTable success_grid_table(const std::vector<SelectionResult>& results, double min_success) {
    TextTable t;
    if (results.empty()) return t;
    t.header = {"p", "s"};
    for (const auto& m : results.front().config.methods) t.header.push_back(m);
    for (const auto& res : results) {
        if (res.config.methods != results.front().config.methods)
            throw InputError("success grid needs the same methods in every experiment");
        std::vector<std::string> row = {std::to_string(res.config.p), std::to_string(res.config.s)};
        bool keep = false;
        for (const auto& m : res.overall) {
            row.push_back(m.not_applicable ? "NA" : format_double(m.success_rate));
            if (!m.not_applicable && m.success_rate > min_success) keep = true;
        }
        if (keep) t.rows.push_back(std::move(row));
    }
    return t;
}

json selection_summary_json(const std::vector<SelectionResult>& results) {
    json arr = json::array();
    for (const auto& res : results) {
        json methods = json::array();
        for (const auto& m : res.overall)
            methods.push_back({{"method", m.method},
                               {"success_rate", m.not_applicable ? json(nullptr) : json(m.success_rate)},
                               {"successes", m.successes},
                               {"valid", m.valid},
                               {"failures", m.failures},
                               {"not_applicable", m.not_applicable}});
        arr.push_back({{"config", twostep::to_json(res.config)}, {"overall", methods}});
    }
    return {{"kind", "selection"}, {"experiments", arr}};
}

TextTable prediction_replications_table(const PredictionResult& r) {
    TextTable t;
    t.header = {"replication", "method", "rpe", "tp", "fp", "lambda", "failed"};
    for (const auto& m : r.replications)
        t.rows.push_back({std::to_string(m.replication), m.method, m.failed ? "NA" : format_double(m.rpe),
                          std::to_string(m.tp), std::to_string(m.fp), m.failed ? "NA" : format_double(m.lambda),
                          m.failed ? "1" : "0"});
    return t;
}

std::vector<std::string> prediction_table_header() {
    return {"example", "method", "median_rpe", "rpe_se", "median_tp", "median_fp", "replications", "failures"};
}

TextTable prediction_summary_table(const std::vector<PredictionResult>& results) {
    TextTable t;
    t.header = prediction_table_header();
    for (const auto& res : results)
        for (const auto& m : res.summary)
            t.rows.push_back({res.config.name, m.method, format_double(m.median_rpe), format_double(m.rpe_se),
                              format_double(m.median_tp), format_double(m.median_fp), std::to_string(m.replications),
                              std::to_string(m.failures)});
    return t;
}

json prediction_summary_json(const std::vector<PredictionResult>& results) {
    json arr = json::array();
    for (const auto& res : results) {
        json methods = json::array();
        for (const auto& m : res.summary)
            methods.push_back({{"method", m.method},
                               {"median_rpe", m.median_rpe},
                               {"rpe_se", m.rpe_se},
                               {"median_tp", m.median_tp},
                               {"median_fp", m.median_fp},
                               {"replications", m.replications},
                               {"failures", m.failures}});
        arr.push_back({{"config", twostep::to_json(res.config)}, {"summary", methods}});
    }
    return {{"kind", "prediction"}, {"experiments", arr}};
}

namespace {

void emit(std::ostream& out, const json& j, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case json::value_t::number_float: {
            const double x = j.get<double>();
            out << (std::isfinite(x) ? format_double(x) : "null");
            break;
        }
        case json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                break;
            }
            out << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                out << (first ? "" : ",\n") << pad << json(it.key()).dump() << ": ";
                emit(out, it.value(), depth + 1);
                first = false;
            }
            out << '\n' << close << '}';
            break;
        }
        case json::value_t::array: {
            bool scalar = true;
            for (const auto& e : j) scalar = scalar && !e.is_structured();
            if (j.empty()) {
                out << "[]";
            } else if (scalar) {
                out << '[';
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out << ", ";
                    emit(out, j[i], depth + 1);
                }
                out << ']';
            } else {
                out << "[\n";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    out << (i ? ",\n" : "") << pad;
                    emit(out, j[i], depth + 1);
                }
                out << '\n' << close << ']';
            }
            break;
        }
        default: out << j.dump();
    }
}

}  // namespace

void write_json(std::ostream& out, const json& j) {
    emit(out, j, 0);
    out << '\n';
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    write_json(out, j);
}

}  // namespace twostep
