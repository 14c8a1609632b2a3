#include "twostep/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "twostep/errors.hpp"

namespace twostep {

namespace {

class FieldErrors {
public:
    void add(std::string msg) { errors_.push_back(std::move(msg)); }
    bool empty() const { return errors_.empty(); }
    [[noreturn]] void raise() const {
        std::string msg = "invalid experiment config:";
        for (const auto& e : errors_) msg += "\n  " + e;
        throw InputError(msg);
    }

private:
    std::vector<std::string> errors_;
};

template <typename T>
void read(const json& j, const char* key, T& out, FieldErrors& errs) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        errs.add(std::string(key) + ": wrong type");
    }
}

CovarianceSpec parse_covariance(const json& j, FieldErrors& errs) {
    CovarianceSpec c;
    if (!j.is_object()) {
        errs.add("covariance: must be an object");
        return c;
    }
    const std::string kind = j.value("kind", std::string("identity"));
    if (kind == "identity") c.kind = CovarianceSpec::Kind::identity;
    else if (kind == "wishart") c.kind = CovarianceSpec::Kind::wishart;
    else if (kind == "ar") c.kind = CovarianceSpec::Kind::ar;
    else if (kind == "constant") c.kind = CovarianceSpec::Kind::constant;
    else if (kind == "block_orthogonal") c.kind = CovarianceSpec::Kind::block_orthogonal;
    else errs.add("covariance.kind: unknown kind '" + kind + "'");
    read(j, "df", c.df, errs);
    read(j, "rho", c.rho, errs);
    read(j, "r", c.r, errs);
    read(j, "a", c.a, errs);
    read(j, "off_corr", c.off_corr, errs);
    return c;
}

BetaSpec parse_beta(const json& j, FieldErrors& errs) {
    BetaSpec b;
    if (!j.is_object()) {
        errs.add("beta: must be an object");
        return b;
    }
    const std::string kind = j.value("kind", std::string("fixed"));
    if (kind == "fixed") b.kind = BetaSpec::Kind::fixed;
    else if (kind == "uniform") b.kind = BetaSpec::Kind::uniform;
    else if (kind == "tiered") b.kind = BetaSpec::Kind::tiered;
    else errs.add("beta.kind: unknown kind '" + kind + "'");
    const std::string placement = j.value("placement", std::string("first"));
    if (placement == "first") b.placement = BetaSpec::Placement::first;
    else if (placement == "random") b.placement = BetaSpec::Placement::random;
    else if (placement == "indices") b.placement = BetaSpec::Placement::indices;
    else errs.add("beta.placement: unknown placement '" + placement + "'");
    read(j, "values", b.values, errs);
    read(j, "counts", b.counts, errs);
    read(j, "low", b.low, errs);
    read(j, "high", b.high, errs);
    read(j, "positions", b.positions, errs);
    return b;
}

std::string covariance_kind_name(CovarianceSpec::Kind k) { return to_string(k); }

std::string beta_kind_name(BetaSpec::Kind k) {
    switch (k) {
        case BetaSpec::Kind::fixed: return "fixed";
        case BetaSpec::Kind::uniform: return "uniform";
        case BetaSpec::Kind::tiered: return "tiered";
    }
    return "?";
}

std::string placement_name(BetaSpec::Placement p) {
    switch (p) {
        case BetaSpec::Placement::first: return "first";
        case BetaSpec::Placement::random: return "random";
        case BetaSpec::Placement::indices: return "indices";
    }
    return "?";
}

int scaled(int base, double scale) { return std::max(1, static_cast<int>(std::lround(base * scale))); }

}  // namespace

std::vector<ExperimentConfig> parse_experiment_configs(const json& j) {
    FieldErrors errs;
    if (!j.is_object()) {
        errs.add("<root>: config must be a JSON object");
        errs.raise();
    }
    static const std::vector<std::string> known = {"name", "kind", "n", "p", "s", "covariance", "beta", "sigma2",
                                                   "replications", "inner_resamples_design", "methods",
                                                   "lambda_rule", "n_test", "grid_size", "bootstrap", "seed"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) errs.add(it.key() + ": unknown field");

    ExperimentConfig base;
    read(j, "name", base.name, errs);
    const std::string kind = j.value("kind", std::string("selection"));
    if (kind == "selection") base.kind = ExperimentKind::selection;
    else if (kind == "prediction") base.kind = ExperimentKind::prediction;
    else errs.add("kind: must be 'selection' or 'prediction'");
    read(j, "n", base.n, errs);
    read(j, "p", base.p, errs);
    read(j, "sigma2", base.sigma2, errs);
    if (j.contains("covariance")) base.covariance = parse_covariance(j["covariance"], errs);
    if (j.contains("beta")) base.beta = parse_beta(j["beta"], errs);
    if (j.contains("replications")) {
        const json& r = j["replications"];
        if (r.is_object()) {
            read(r, "outer", base.outer, errs);
            read(r, "inner", base.inner, errs);
        } else {
            errs.add("replications: must be an object {outer, inner}");
        }
    }
    read(j, "inner_resamples_design", base.inner_resamples_design, errs);
    read(j, "methods", base.methods, errs);
    if (j.contains("lambda_rule")) {
        const json& lr = j["lambda_rule"];
        const std::string rule = lr.is_object() ? lr.value("kind", std::string()) : std::string();
        if (rule == "oracle") {
            base.lambda_rule = LambdaRule::oracle;
        } else if (rule == "cv") {
            base.lambda_rule = LambdaRule::cv;
            read(lr, "k", base.cv_folds, errs);
        } else {
            errs.add("lambda_rule: must be {\"kind\": \"oracle\"} or {\"kind\": \"cv\", \"k\": K}");
        }
    }
    read(j, "n_test", base.n_test, errs);
    read(j, "grid_size", base.grid_size, errs);
    read(j, "bootstrap", base.bootstrap, errs);
    read(j, "seed", base.seed, errs);

    std::vector<int> s_values;
    if (j.contains("s")) {
        if (j["s"].is_array()) read(j, "s", s_values, errs);
        else {
            int s = 0;
            read(j, "s", s, errs);
            s_values.push_back(s);
        }
    } else {
        s_values.push_back(base.s);
    }
    if (s_values.empty()) errs.add("s: list must be nonempty");

    std::vector<ExperimentConfig> out;
    for (int s : s_values) {
        ExperimentConfig c = base;
        c.s = s;
        for (auto& problem : c.problems()) errs.add(s_values.size() > 1 ? "[s=" + std::to_string(s) + "] " + problem : problem);
        out.push_back(std::move(c));
    }
    if (!errs.empty()) errs.raise();
    return out;
}

std::vector<ExperimentConfig> load_experiment_configs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    return parse_experiment_configs(j);
}

json to_json(const ExperimentConfig& c) {
    json cov = {{"kind", covariance_kind_name(c.covariance.kind)}};
    switch (c.covariance.kind) {
        case CovarianceSpec::Kind::wishart: cov["df"] = c.covariance.df; break;
        case CovarianceSpec::Kind::ar: cov["rho"] = c.covariance.rho; break;
        case CovarianceSpec::Kind::constant: cov["r"] = c.covariance.r; break;
        case CovarianceSpec::Kind::block_orthogonal:
            cov["a"] = c.covariance.a;
            cov["off_corr"] = c.covariance.off_corr;
            break;
        case CovarianceSpec::Kind::identity: break;
    }
    json beta = {{"kind", beta_kind_name(c.beta.kind)}, {"placement", placement_name(c.beta.placement)}};
    if (c.beta.kind != BetaSpec::Kind::uniform) beta["values"] = c.beta.values;
    if (c.beta.kind == BetaSpec::Kind::tiered) beta["counts"] = c.beta.counts;
    if (c.beta.kind == BetaSpec::Kind::uniform) {
        beta["low"] = c.beta.low;
        beta["high"] = c.beta.high;
    }
    if (c.beta.placement == BetaSpec::Placement::indices) beta["positions"] = c.beta.positions;
    json rule = c.lambda_rule == LambdaRule::oracle ? json{{"kind", "oracle"}} : json{{"kind", "cv"}, {"k", c.cv_folds}};
    json j = {{"name", c.name},
              {"kind", c.kind == ExperimentKind::selection ? "selection" : "prediction"},
              {"n", c.n},
              {"p", c.p},
              {"s", c.s},
              {"covariance", cov},
              {"beta", beta},
              {"sigma2", c.sigma2},
              {"replications", {{"outer", c.outer}, {"inner", c.inner}}},
              {"inner_resamples_design", c.inner_resamples_design},
              {"methods", c.methods},
              {"lambda_rule", rule},
              {"grid_size", c.grid_size},
              {"seed", c.seed}};
    if (c.kind == ExperimentKind::prediction) {
        j["n_test"] = c.n_test;
        j["bootstrap"] = c.bootstrap;
    }
    return j;
}

BuiltinExperiment parse_builtin(const std::string& name) {
    if (name == "figure1") return BuiltinExperiment::figure1;
    if (name == "table1") return BuiltinExperiment::table1;
    if (name == "table1_p16") return BuiltinExperiment::table1_p16;
    if (name == "table2") return BuiltinExperiment::table2;
    if (name == "table3") return BuiltinExperiment::table3;
    throw InputError("unknown experiment '" + name + "' (expected figure1, table1, table1_p16, table2, table3)");
}

namespace {

ExperimentConfig figure1_config(double scale, std::uint64_t seed) {
    ExperimentConfig c;
    c.name = "figure1";
    c.kind = ExperimentKind::selection;
    c.n = 100;
    c.p = 32;
    c.s = 5;
    c.covariance.kind = CovarianceSpec::Kind::wishart;
    c.covariance.df = 32;
    c.beta.kind = BetaSpec::Kind::fixed;
    c.beta.values = {7, 4, 2, 1, 1};
    c.beta.placement = BetaSpec::Placement::first;
    c.sigma2 = 0.1;
    c.outer = scaled(100, scale);
    c.inner = scaled(1000, scale);
    c.inner_resamples_design = false;
    c.methods = {"Lasso", "NG-Ridge", "ALasso-Ridge", "HT-Ridge"};
    c.lambda_rule = LambdaRule::oracle;
    c.seed = seed;
    return c;
}

std::vector<ExperimentConfig> table1_configs(const std::vector<int>& ps, double scale, std::uint64_t seed) {
    std::vector<ExperimentConfig> out;
    for (int p : ps) {
        for (int k = 1; k <= 15; k += 2) {
            const int s = k * p / 16;
            if (s > 50) break;
            ExperimentConfig c;
            c.name = "table1";
            c.kind = ExperimentKind::selection;
            c.n = 50;
            c.p = p;
            c.s = s;
            c.covariance.kind = CovarianceSpec::Kind::wishart;
            c.covariance.df = p;
            c.beta.kind = BetaSpec::Kind::uniform;
            c.beta.low = 0.5;
            c.beta.high = 2.0;
            c.beta.placement = BetaSpec::Placement::first;
            c.sigma2 = 0.5;
            c.outer = scaled(100, scale);
            c.inner = scaled(100, scale);
            c.inner_resamples_design = true;
            c.methods = {"Lasso",    "HT-Univ",     "HT-OLS",     "HT-Ridge",     "HT-Lasso",
                         "ALasso-Univ", "ALasso-OLS", "ALasso-Ridge", "ALasso-Lasso"};
            c.lambda_rule = LambdaRule::oracle;
            c.seed = seed;
            out.push_back(c);
        }
    }
    return out;
}

ExperimentConfig prediction_base(double scale, std::uint64_t seed) {
    ExperimentConfig c;
    c.kind = ExperimentKind::prediction;
    c.n = 50;
    c.p = 200;
    c.s = 15;
    c.sigma2 = 1.5 * 1.5;
    c.beta.kind = BetaSpec::Kind::tiered;
    c.beta.values = {2.5, 1.5, 0.5};
    c.beta.counts = {5, 5, 5};
    c.beta.placement = BetaSpec::Placement::random;
    c.outer = scaled(200, scale);
    c.inner = 1;
    c.n_test = 1000;
    c.methods = {"Lasso", "ALasso-Univ", "ALasso-Lasso", "ALasso-Ridge", "HT-Univ", "HT-Lasso", "HT-Ridge"};
    c.lambda_rule = LambdaRule::cv;
    c.cv_folds = 5;
    c.seed = seed;
    return c;
}

std::string trim_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<ExperimentConfig> table2_configs(double scale, std::uint64_t seed) {
    std::vector<ExperimentConfig> out;
    for (double rho : {0.5, 0.75, 0.95}) {
        ExperimentConfig c = prediction_base(scale, seed);
        c.name = "example1_rho" + trim_number(rho);
        c.covariance.kind = CovarianceSpec::Kind::ar;
        c.covariance.rho = rho;
        out.push_back(c);
    }
    for (double r : {0.3, 0.6, 0.85}) {
        ExperimentConfig c = prediction_base(scale, seed);
        c.name = "example2_r" + trim_number(r);
        c.covariance.kind = CovarianceSpec::Kind::constant;
        c.covariance.r = r;
        out.push_back(c);
    }
    for (int a : {15, 50, 85}) {
        ExperimentConfig c = prediction_base(scale, seed);
        c.name = "example3_a" + std::to_string(a);
        c.covariance.kind = CovarianceSpec::Kind::block_orthogonal;
        c.covariance.a = a;
        c.covariance.off_corr = 0.6;
        c.beta.placement = BetaSpec::Placement::first;
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::vector<ExperimentConfig> builtin_experiments(BuiltinExperiment which, double scale, std::uint64_t seed) {
    if (!(scale > 0.0)) throw InputError("scale must be positive");
    switch (which) {
        case BuiltinExperiment::figure1: return {figure1_config(scale, seed)};
        case BuiltinExperiment::table1: return table1_configs({16, 32, 64, 128, 256, 512}, scale, seed);
        case BuiltinExperiment::table1_p16: return table1_configs({16}, scale, seed);
        case BuiltinExperiment::table2:
        case BuiltinExperiment::table3: return table2_configs(scale, seed);
    }
    throw InputError("unhandled experiment");
}

}  // namespace twostep
