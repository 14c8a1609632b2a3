#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twostep/config.hpp"
#include "twostep/diagnostics.hpp"
#include "twostep/errors.hpp"
#include "twostep/initial_estimators.hpp"
#include "twostep/pipeline.hpp"
#include "twostep/report.hpp"
#include "twostep/selectors.hpp"
#include "twostep/simulation.hpp"

namespace py = pybind11;
using namespace twostep;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
    return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Dataset dataset(const Matrix& X, const Vector& y) {
    if (X.rows() != y.size())
        throw InputError("X has " + std::to_string(X.rows()) + " rows but y has " + std::to_string(y.size()));
    return make_dataset(X, y);
}

MethodSpec method_spec(const std::string& method, std::optional<double> nu, double gamma, bool standardize) {
    MethodSpec spec = parse_method_label(method);
    spec.initial.nu = nu;
    spec.gamma = gamma;
    spec.standardize = standardize;
    return spec;
}

py::dict fit(const Matrix& X, const Vector& y, const std::string& method, std::optional<double> lam, int cv_folds,
             std::optional<double> nu, double gamma, bool standardize, bool standardized_output, std::uint64_t seed) {
    FitRequest req;
    req.spec = method_spec(method, nu, gamma, standardize);
    req.lambda = lam;
    req.cv_folds = cv_folds;
    req.seed = seed;
    req.standardized_output = standardized_output;
    FitReport r;
    {
        py::gil_scoped_release release;
        r = run_fit(dataset(X, y), req);
    }
    return to_py(to_json(r));
}

// Whole path, coefficients on the caller's scale (one row per lambda).
py::dict path(const Matrix& X, const Vector& y, const std::string& method, std::optional<Vector> grid,
              std::optional<double> nu, double gamma, bool standardize, std::uint64_t seed) {
    const MethodSpec spec = method_spec(method, nu, gamma, standardize);
    const MethodFit f = fit_method_path(dataset(X, y), spec, grid, seed);
    const int k = f.path.size();
    Matrix coef(k, X.cols());
    Vector intercept(k);
    std::vector<int> sizes;
    for (int i = 0; i < k; ++i) {
        const LinearFit lf = f.original(i);
        coef.row(i) = lf.beta.transpose();
        intercept(i) = lf.intercept;
        sizes.push_back(f.path.supports[static_cast<std::size_t>(i)].size());
    }
    py::dict out;
    out["method"] = spec.label();
    out["lambdas"] = f.path.lambdas;
    out["coefficients"] = coef;
    out["intercepts"] = intercept;
    out["support_sizes"] = sizes;
    return out;
}

py::dict initial(const Matrix& X, const Vector& y, const std::string& method, std::optional<double> nu,
                 bool standardize) {
    Dataset d = dataset(X, y);
    if (standardize) d = twostep::standardize(d);
    InitialEstimate e;
    switch (parse_initial_method(method)) {
        case InitialMethod::ols: e = fit_ols(d); break;
        case InitialMethod::univariate: e = fit_univariate(d); break;
        case InitialMethod::ridge: e = nu ? fit_ridge(d, *nu) : select_ridge_gcv(d).estimate; break;
        case InitialMethod::lasso: {
            InitialSpec spec;
            spec.method = InitialMethod::lasso;
            e = fit_initial(d, spec, 1);
            break;
        }
    }
    py::dict out;
    out["method"] = to_string(e.method);
    out["beta"] = e.beta;
    out["tuning"] = e.tuning;
    out["gcv"] = e.gcv;
    return out;
}

py::dict diagnose(const Matrix& X, std::optional<Vector> beta, bool eta) {
    if (beta && beta->size() != X.cols())
        throw InputError("beta has " + std::to_string(beta->size()) + " entries, X has " + std::to_string(X.cols()) +
                         " columns");
    const Dataset d{X, Vector::Zero(X.rows()), std::nullopt};
    return to_py(diagnose_json(d, beta, eta));
}

double eta_inf(const Matrix& X, const Vector& beta) {
    if (beta.size() != X.cols()) throw InputError("beta length does not match the number of columns");
    const Dataset d = twostep::standardize(make_dataset(X, Vector::Zero(X.rows())));
    const SupportSet S = support_of(beta, 0.0);
    return eta_infinity(d, S, sign_pattern(beta, 0.0).restricted(S));
}

py::dict run_experiment(const py::object& config, int workers) {
    const auto configs = parse_experiment_configs(from_py(config));
    if (configs.empty()) throw InputError("no experiment configured");
    py::gil_scoped_release release;
    if (configs.front().kind == ExperimentKind::selection) {
        std::vector<SelectionResult> rs;
        for (const auto& c : configs) rs.push_back(run_selection_experiment(c, workers));
        py::gil_scoped_acquire acquire;
        return to_py(selection_summary_json(rs));
    }
    std::vector<PredictionResult> rs;
    for (const auto& c : configs) rs.push_back(run_prediction_experiment(c, workers));
    py::gil_scoped_acquire acquire;
    return to_py(prediction_summary_json(rs));
}

py::list builtin(const std::string& name, double scale, std::uint64_t seed) {
    py::list out;
    for (const auto& c : builtin_experiments(parse_builtin(name), scale, seed)) out.append(to_py(to_json(c)));
    return out;
}

}  // namespace

PYBIND11_MODULE(twostep, m) {
    m.doc() = "Two-step sparse regression: initial estimate, then garrote / adaptive lasso / hard threshold";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    m.def("fit", &fit, py::arg("X"), py::arg("y"), py::arg("method") = "ALasso-Ridge", py::arg("lam") = py::none(),
          py::arg("cv_folds") = 5, py::arg("nu") = py::none(), py::arg("gamma") = 1.0, py::arg("standardize") = true,
          py::arg("standardized_output") = false, py::arg("seed") = 1,
          "Fit one method; lam=None picks lambda by k-fold CV. Returns the fit report as a dict.");
    m.def("path", &path, py::arg("X"), py::arg("y"), py::arg("method") = "ALasso-Ridge", py::arg("grid") = py::none(),
          py::arg("nu") = py::none(), py::arg("gamma") = 1.0, py::arg("standardize") = true, py::arg("seed") = 1);
    m.def("initial", &initial, py::arg("X"), py::arg("y"), py::arg("method") = "ridge", py::arg("nu") = py::none(),
          py::arg("standardize") = true);
    m.def("diagnose", &diagnose, py::arg("X"), py::arg("beta") = py::none(), py::arg("eta") = true);
    m.def("eta_infinity", &eta_inf, py::arg("X"), py::arg("beta"),
          "Irrepresentable margin of the standardized design for the sign pattern of beta.");
    m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("workers") = 1);
    m.def("builtin_configs", &builtin, py::arg("name"), py::arg("scale") = 1.0, py::arg("seed") = 1);
    m.def("soft_threshold", &soft_threshold, py::arg("z"), py::arg("t"));
    m.def("hard_threshold", py::overload_cast<const Vector&, double>(&hard_threshold), py::arg("beta"),
          py::arg("lam"));
}
