#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "twostep/config.hpp"
#include "twostep/errors.hpp"
#include "twostep/features.hpp"
#include "twostep/io.hpp"
#include "twostep/report.hpp"
#include "twostep/sweep.hpp"

namespace fs = std::filesystem;
using namespace twostep;

namespace {

constexpr int kInputError = 2;
constexpr int kNumericalError = 3;

Dataset load_dataset(const std::string& design, const std::string& response) {
    const CsvTable X = read_csv(design);
    const Vector y = read_response_csv(response);
    if (X.values.rows() != y.size())
        throw InputError("design has " + std::to_string(X.values.rows()) + " rows but response has " +
                         std::to_string(y.size()));
    return make_dataset(X.values, y);
}

Vector load_vector(const std::string& path, int expected, const char* what) {
    const CsvTable t = read_csv(path);
    Vector v;
    if (t.header.size() == 1) v = t.values.col(0);
    else if (t.values.rows() == 1) v = t.values.row(0).transpose();
    else throw InputError(path + ": " + what + " must be a single column or a single row");
    if (v.size() != expected)
        throw InputError(path + ": " + what + " has length " + std::to_string(v.size()) + ", expected " +
                         std::to_string(expected));
    return v;
}

void emit_json(const std::string& out, const json& j) {
    if (out.empty() || out == "-") write_json(std::cout, j);
    else write_json(out, j);
}

std::string with_suffix(const std::string& prefix, const std::string& suffix) { return prefix + suffix; }

void ensure_parent(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

TextTable pick_columns(const TextTable& t, const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    for (const auto& n : names)
        for (std::size_t j = 0; j < t.header.size(); ++j)
            if (t.header[j] == n) idx.push_back(j);
    TextTable out;
    for (auto j : idx) out.header.push_back(t.header[j]);
    for (const auto& row : t.rows) {
        std::vector<std::string> r;
        for (auto j : idx) r.push_back(row[j]);
        out.rows.push_back(std::move(r));
    }
    return out;
}

void write_selection_outputs(const std::string& prefix, const std::vector<SelectionResult>& results) {
    std::ofstream designs(with_suffix(prefix, "_designs.csv"));
    if (!designs) throw InputError("cannot write '" + prefix + "_designs.csv'");
    bool header = true;
    for (const auto& r : results) {
        TextTable t = selection_designs_table(r);
        t.header.insert(t.header.begin(), {"p", "s"});
        for (auto& row : t.rows) row.insert(row.begin(), {std::to_string(r.config.p), std::to_string(r.config.s)});
        if (!header) t.header.clear();
        if (header) write_csv(designs, t);
        else
            for (const auto& row : t.rows) {
                for (std::size_t j = 0; j < row.size(); ++j) designs << (j ? "," : "") << row[j];
                designs << '\n';
            }
        header = false;
    }
    write_csv(with_suffix(prefix, "_grid.csv"), success_grid_table(results));
    write_json(with_suffix(prefix, "_summary.json"), selection_summary_json(results));
}

void write_prediction_outputs(const std::string& prefix, const std::vector<PredictionResult>& results) {
    std::ofstream reps(with_suffix(prefix, "_replications.csv"));
    if (!reps) throw InputError("cannot write '" + prefix + "_replications.csv'");
    bool header = true;
    for (const auto& r : results) {
        TextTable t = prediction_replications_table(r);
        t.header.insert(t.header.begin(), "example");
        for (auto& row : t.rows) row.insert(row.begin(), r.config.name);
        if (header) write_csv(reps, t);
        else
            for (const auto& row : t.rows) {
                for (std::size_t j = 0; j < row.size(); ++j) reps << (j ? "," : "") << row[j];
                reps << '\n';
            }
        header = false;
    }
    write_csv(with_suffix(prefix, "_summary.csv"), prediction_summary_table(results));
    write_json(with_suffix(prefix, "_summary.json"), prediction_summary_json(results));
}

// Runs every config of one kind; mixed kinds are rejected.
void run_configs(const std::vector<ExperimentConfig>& configs, const std::string& prefix, int workers) {
    if (configs.empty()) throw InputError("no experiments to run");
    const ExperimentKind kind = configs.front().kind;
    for (const auto& c : configs)
        if (c.kind != kind) throw InputError("a config file must not mix selection and prediction experiments");
    if (kind == ExperimentKind::selection) {
        std::vector<SelectionResult> results;
        for (const auto& c : configs) results.push_back(run_selection_experiment(c, workers));
        write_selection_outputs(prefix, results);
        if (results.size() == 1) write_csv(with_suffix(prefix, "_eta.csv"), figure1_table(results.front()));
    } else {
        std::vector<PredictionResult> results;
        for (const auto& c : configs) results.push_back(run_prediction_experiment(c, workers));
        write_prediction_outputs(prefix, results);
    }
}

void apply_scale(std::vector<ExperimentConfig>& configs, double scale) {
    if (!(scale > 0.0)) throw InputError("--scale must be positive");
    for (auto& c : configs) {
        c.outer = std::max(1, static_cast<int>(std::lround(c.outer * scale)));
        if (c.kind == ExperimentKind::selection) c.inner = std::max(1, static_cast<int>(std::lround(c.inner * scale)));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-step sparse regression: fitting, diagnostics and simulation"};
    app.require_subcommand(1);
    int workers = default_workers();

    // fit
    auto* fit = app.add_subcommand("fit", "Fit a (two-step) sparse regression and report it as JSON");
    std::string design, response, init = "ridge", init_file, method = "alasso", lambda_rule = "cv5", out;
    double gamma = 1.0;
    std::optional<double> nu;
    bool no_standardize = false, standardized_output = false;
    std::uint64_t seed = 1;
    fit->add_option("--design", design, "Design matrix CSV (header row)")->required();
    fit->add_option("--response", response, "Single-column response CSV")->required();
    fit->add_option("--init", init, "Initial estimator: ols, univ, ridge, lasso");
    fit->add_option("--init-file", init_file, "Use these initial coefficients (original scale)");
    fit->add_option("--method", method, "Second step: lasso, garrote, alasso, ht");
    fit->add_option("--lambda", lambda_rule, "cvK for K-fold CV, or a positive number");
    fit->add_option("--gamma", gamma, "Adaptive Lasso weight exponent");
    fit->add_option("--nu", nu, "Fixed ridge parameter (GCV when omitted)");
    fit->add_flag("--no-standardize", no_standardize, "Fit on the raw columns");
    fit->add_flag("--standardized-output", standardized_output, "Report coefficients on the standardized scale");
    fit->add_option("--seed", seed, "Seed for CV folds");
    fit->add_option("--out", out, "Output path (stdout when omitted)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run experiments from a JSON config");
    std::string config_path, prefix = "sim";
    std::optional<std::uint64_t> sim_seed;
    double sim_scale = 1.0;
    sim->add_option("--config", config_path, "Experiment config JSON")->required();
    sim->add_option("--out", prefix, "Output prefix");
    sim->add_option("--seed", sim_seed, "Override the config seed");
    sim->add_option("--scale", sim_scale, "Multiply replication counts");
    sim->add_option("--workers", workers, "Worker threads (default from TWOSTEP_WORKERS)");

    // diagnose
    auto* diag = app.add_subcommand("diagnose", "Design diagnostics as JSON");
    std::string diag_design, beta_path, diag_out;
    bool want_eta = false;
    diag->add_option("--design", diag_design, "Design matrix CSV")->required();
    diag->add_option("--beta", beta_path, "True coefficients (single column or row)");
    diag->add_flag("--eta", want_eta, "Require eta_inf (needs --beta)");
    diag->add_option("--out", diag_out, "Output path (stdout when omitted)");

    // expand-features
    auto* expand = app.add_subcommand("expand-features", "Main effects, squares and pairwise products");
    std::string raw_path, spec_path, expand_out;
    expand->add_option("--input", raw_path, "Raw feature CSV")->required();
    expand->add_option("--spec", spec_path, "Expansion spec JSON")->required();
    expand->add_option("--out", expand_out, "Output CSV (stdout when omitted)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Test MSE as a function of model size over random splits");
    std::string sw_design, sw_response, sw_out;
    SweepOptions sw;
    sweep->add_option("--design", sw_design, "Design matrix CSV")->required();
    sweep->add_option("--response", sw_response, "Response CSV")->required();
    sweep->add_option("--splits", sw.splits, "Number of random splits");
    sweep->add_option("--train", sw.n_train, "Training rows per split");
    sweep->add_option("--max-size", sw.max_size, "Largest sparsity level");
    sweep->add_option("--methods", sw.methods, "Method labels, e.g. Lasso ALasso-Ridge HT-Univ")->delimiter(',');
    sweep->add_option("--seed", sw.seed, "Split seed");
    sweep->add_option("--workers", workers, "Worker threads (default from TWOSTEP_WORKERS)");
    sweep->add_option("--out", sw_out, "Output CSV (stdout when omitted); metadata goes to OUT.meta.json");

    // reproduce
    auto* repro = app.add_subcommand("reproduce", "Run a bundled experiment");
    std::string which, repro_out = "results";
    double scale = 1.0;
    std::uint64_t repro_seed = 1;
    repro->add_option("experiment", which, "figure1, table1, table2 or table3")->required();
    repro->add_option("--scale", scale, "Multiply replication counts");
    repro->add_option("--seed", repro_seed, "Master seed");
    repro->add_option("--workers", workers, "Worker threads (default from TWOSTEP_WORKERS)");
    repro->add_option("--out", repro_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (workers < 1) throw InputError("--workers must be at least 1");
        if (*fit) {
            const Dataset d = load_dataset(design, response);
            FitRequest req;
            req.spec.step = parse_second_step(method);
            req.spec.initial.method = parse_initial_method(init);
            req.spec.initial.nu = nu;
            if (!init_file.empty()) req.spec.initial.fixed_beta = load_vector(init_file, d.p(), "initial estimate");
            req.spec.gamma = gamma;
            req.spec.standardize = !no_standardize;
            req.seed = seed;
            req.standardized_output = standardized_output;
            if (lambda_rule.rfind("cv", 0) == 0) {
                try {
                    req.cv_folds = std::stoi(lambda_rule.substr(2));
                } catch (const std::exception&) {
                    throw InputError("--lambda must be cvK or a number, got '" + lambda_rule + "'");
                }
            } else {
                std::size_t used = 0;
                try {
                    req.lambda = std::stod(lambda_rule, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != lambda_rule.size()) throw InputError("--lambda must be cvK or a number, got '" + lambda_rule + "'");
            }
            emit_json(out, to_json(run_fit(d, req)));
        } else if (*sim) {
            auto configs = load_experiment_configs(config_path);
            if (sim_seed)
                for (auto& c : configs) c.seed = *sim_seed;
            if (sim_scale != 1.0) apply_scale(configs, sim_scale);
            ensure_parent(prefix);
            run_configs(configs, prefix, workers);
        } else if (*diag) {
            const CsvTable X = read_csv(diag_design);
            std::optional<Vector> beta;
            if (!beta_path.empty()) beta = load_vector(beta_path, static_cast<int>(X.values.cols()), "beta");
            const Dataset d{X.values, Vector::Zero(X.values.rows()), std::nullopt};
            emit_json(diag_out, diagnose_json(d, beta, want_eta));
        } else if (*expand) {
            const CsvTable raw = read_csv(raw_path);
            std::ifstream in(spec_path);
            if (!in) throw InputError("cannot open '" + spec_path + "'");
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw InputError(spec_path + ": " + e.what());
            }
            const CsvTable expanded = expand_features(raw, parse_expansion_spec(j, raw.header));
            if (expand_out.empty()) write_csv(std::cout, expanded);
            else write_csv(expand_out, expanded);
        } else if (*sweep) {
            const Dataset d = load_dataset(sw_design, sw_response);
            const SweepResult r = sparsity_sweep(d, sw, workers);
            const TextTable t = sweep_table(r);
            json meta = {{"selection_rule", "path point with support size nearest the target; ties toward smaller lambda"},
                         {"splits", sw.splits},
                         {"train", sw.n_train},
                         {"test", d.n() - sw.n_train},
                         {"seed", sw.seed},
                         {"methods", sw.methods},
                         {"failures", r.failures}};
            if (sw_out.empty()) {
                write_csv(std::cout, t);
            } else {
                write_csv(sw_out, t);
                write_json(sw_out + ".meta.json", meta);
            }
        } else if (*repro) {
            const BuiltinExperiment exp = parse_builtin(which);
            if (exp == BuiltinExperiment::table1_p16) throw InputError("unknown experiment '" + which + "'");
            const auto configs = builtin_experiments(exp, scale, repro_seed);
            fs::create_directories(repro_out);
            const std::string base = (fs::path(repro_out) / which).string();
            switch (exp) {
                case BuiltinExperiment::figure1: {
                    const SelectionResult r = run_selection_experiment(configs.front(), workers);
                    write_csv(base + ".csv", figure1_table(r));
                    write_json(base + "_summary.json", selection_summary_json({r}));
                    break;
                }
                case BuiltinExperiment::table1:
                case BuiltinExperiment::table1_p16: {
                    std::vector<SelectionResult> results;
                    for (const auto& c : configs) results.push_back(run_selection_experiment(c, workers));
                    write_csv(base + ".csv", success_grid_table(results, 0.01));
                    write_json(base + "_summary.json", selection_summary_json(results));
                    break;
                }
                case BuiltinExperiment::table2:
                case BuiltinExperiment::table3: {
                    std::vector<PredictionResult> results;
                    for (const auto& c : configs) results.push_back(run_prediction_experiment(c, workers));
                    const TextTable full = prediction_summary_table(results);
                    const std::vector<std::string> cols =
                        exp == BuiltinExperiment::table2
                            ? std::vector<std::string>{"example", "method", "median_rpe", "rpe_se"}
                            : std::vector<std::string>{"example", "method", "median_tp", "median_fp"};
                    write_csv(base + ".csv", pick_columns(full, cols));
                    write_json(base + "_summary.json", prediction_summary_json(results));
                    break;
                }
            }
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
