#include "twostep/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "twostep/errors.hpp"
#include "twostep/rng.hpp"

namespace twostep {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string initial_suffix(const InitialSpec& spec) {
    if (spec.fixed_beta) return "Fixed";
    switch (spec.method) {
        case InitialMethod::ols: return "OLS";
        case InitialMethod::univariate: return "Univ";
        case InitialMethod::ridge: return "Ridge";
        case InitialMethod::lasso: return "Lasso";
    }
    return "?";
}

Dataset rows_of(const Dataset& d, const std::vector<int>& rows) {
    Dataset out;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), d.p());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.X.row(static_cast<Eigen::Index>(r)) = d.X.row(rows[r]);
        out.y(static_cast<Eigen::Index>(r)) = d.y(rows[r]);
    }
    return out;
}

}  // namespace

std::string to_string(SecondStep s) {
    switch (s) {
        case SecondStep::lasso: return "lasso";
        case SecondStep::garrote: return "garrote";
        case SecondStep::alasso: return "alasso";
        case SecondStep::hard_threshold: return "ht";
    }
    return "?";
}

SecondStep parse_second_step(const std::string& name) {
    const std::string s = lower(name);
    if (s == "lasso") return SecondStep::lasso;
    if (s == "garrote" || s == "ng") return SecondStep::garrote;
    if (s == "alasso") return SecondStep::alasso;
    if (s == "ht" || s == "hard_threshold" || s == "hard-threshold") return SecondStep::hard_threshold;
    throw InputError("unknown second-step method '" + name + "'");
}

std::string MethodSpec::label() const {
    switch (step) {
        case SecondStep::lasso: return "Lasso";
        case SecondStep::garrote: return "NG-" + initial_suffix(initial);
        case SecondStep::alasso: return "ALasso-" + initial_suffix(initial);
        case SecondStep::hard_threshold: return "HT-" + initial_suffix(initial);
    }
    return "?";
}

MethodSpec parse_method_label(const std::string& label) {
    const std::string s = lower(label);
    MethodSpec spec;
    if (s == "lasso") return spec;
    const auto dash = s.find('-');
    if (dash == std::string::npos) throw InputError("method label '" + label + "' is not of the form STEP-INIT");
    spec.step = parse_second_step(s.substr(0, dash));
    if (spec.step == SecondStep::lasso) throw InputError("plain Lasso takes no initial estimator: '" + label + "'");
    spec.initial.method = parse_initial_method(s.substr(dash + 1));
    return spec;
}

InitialEstimate fit_initial(const Dataset& work, const InitialSpec& spec, std::uint64_t seed) {
    if (spec.fixed_beta) {
        if (spec.fixed_beta->size() != work.p()) throw InputError("fixed initial estimate has the wrong length");
        InitialEstimate est;
        est.method = spec.method;
        est.beta = *spec.fixed_beta;
        return est;
    }
    switch (spec.method) {
        case InitialMethod::ols: return fit_ols(work);
        case InitialMethod::univariate: return fit_univariate(work);
        case InitialMethod::ridge:
            return spec.nu ? fit_ridge(work, *spec.nu) : select_ridge_gcv(work).estimate;
        case InitialMethod::lasso: {
            if (spec.lambda) return fit_lasso(work, *spec.lambda);
            MethodSpec lasso;
            lasso.step = SecondStep::lasso;
            const CvResult cv = select_lambda_cv(work, lasso, std::nullopt, spec.lasso_cv_folds, seed);
            InitialEstimate est;
            est.method = InitialMethod::lasso;
            est.tuning = cv.lambda;
            est.beta = cv.fit.beta;
            return est;
        }
    }
    throw InputError("unhandled initial estimator");
}

Vector second_step_grid(const Dataset& work, const InitialEstimate& init, const MethodSpec& spec) {
    switch (spec.step) {
        case SecondStep::lasso:
            return default_lambda_grid(lasso_lambda_max(work), spec.grid_size, spec.grid_ratio);
        case SecondStep::garrote:
            return default_lambda_grid(garrote_lambda_max(work, init), spec.grid_size, spec.grid_ratio);
        case SecondStep::alasso: {
            const double top = init.beta.cwiseAbs().maxCoeff() < kZeroInitial ? 0.0
                                                                              : alasso_lambda_max(work, init, spec.gamma);
            return default_lambda_grid(top, spec.grid_size, spec.grid_ratio);
        }
        case SecondStep::hard_threshold: return hard_threshold_grid(init.beta);
    }
    throw InputError("unhandled second step");
}

PathSolution second_step_path(const Dataset& work, const InitialEstimate& init, const MethodSpec& spec,
                              const Vector& grid) {
    switch (spec.step) {
        case SecondStep::lasso: return lasso_path(work, grid, spec.cd);
        case SecondStep::garrote: return garrote_path(work, init, grid, spec.cd);
        case SecondStep::alasso: {
            if (init.beta.cwiseAbs().maxCoeff() < kZeroInitial) {
                // Every weight is infinite: the zero vector is the only feasible point.
                check_descending_grid(grid);
                PathSolution path;
                path.method = "alasso";
                for (Eigen::Index i = 0; i < grid.size(); ++i) path.push(grid(i), Vector::Zero(work.p()));
                return path;
            }
            return alasso_path(work, init, grid, spec.gamma, spec.cd);
        }
        case SecondStep::hard_threshold: return hard_threshold_path(init.beta, grid);
    }
    throw InputError("unhandled second step");
}

LinearFit MethodFit::original(int i) const {
    const Vector& b = path.coefficients.at(static_cast<std::size_t>(i));
    if (record) return to_original_scale(b, *record);
    return LinearFit{b, 0.0};
}

MethodFit fit_method_path(const Dataset& d, const MethodSpec& spec, const std::optional<Vector>& grid,
                          std::uint64_t seed) {
    d.validate();
    MethodFit fit;
    fit.spec = spec;
    Dataset work;
    if (spec.standardize) {
        work = standardize(Dataset{d.X, d.y, std::nullopt});
        fit.record = work.standardization;
    } else {
        work = Dataset{d.X, d.y, std::nullopt};
    }
    if (spec.needs_initial()) {
        InitialSpec ispec = spec.initial;
        if (ispec.fixed_beta && fit.record) ispec.fixed_beta = to_standardized_scale(*ispec.fixed_beta, *fit.record);
        fit.initial = fit_initial(work, ispec, seed);
    }
    const Vector g = grid ? *grid : second_step_grid(work, fit.initial, spec);
    fit.path = second_step_path(work, fit.initial, spec, g);
    return fit;
}

std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t seed) {
    if (k < 2) throw InputError("cross-validation needs k >= 2");
    if (n < k) throw InputError("cross-validation needs n >= k");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng = make_stream(seed, {0x43564644u});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<int>> folds(k);
    int pos = 0;
    for (int f = 0; f < k; ++f) {
        const int size = n / k + (f < n % k ? 1 : 0);
        folds[f].assign(perm.begin() + pos, perm.begin() + pos + size);
        std::sort(folds[f].begin(), folds[f].end());
        pos += size;
    }
    return folds;
}

CvResult select_lambda_cv(const Dataset& d, const MethodSpec& spec, const std::optional<Vector>& grid, int k,
                          std::uint64_t seed) {
    d.validate();
    const auto folds = make_folds(d.n(), k, seed);
    CvResult out;
    out.full = fit_method_path(d, spec, grid, derive_seed(seed, {0}));
    const Vector lambdas = out.full.path.lambdas;
    const int m = static_cast<int>(lambdas.size());

    out.cv_error = Vector::Zero(m);
    for (int f = 0; f < k; ++f) {
        std::vector<char> held(d.n(), 0);
        for (int i : folds[f]) held[i] = 1;
        std::vector<int> train_rows;
        for (int i = 0; i < d.n(); ++i)
            if (!held[i]) train_rows.push_back(i);
        const Dataset train = rows_of(d, train_rows);
        const Dataset valid = rows_of(d, folds[f]);
        const MethodFit fold_fit = fit_method_path(train, spec, lambdas, derive_seed(seed, {static_cast<std::uint64_t>(f) + 1}));
        for (int i = 0; i < m; ++i) {
            const LinearFit lf = fold_fit.original(i);
            const Vector resid = (valid.y - valid.X * lf.beta).array() - lf.intercept;
            out.cv_error(i) += resid.squaredNorm() / valid.n() / k;
        }
    }

    int best = 0;
    for (int i = 1; i < m; ++i) {
        const double tie = 1e-12 * std::max(std::abs(out.cv_error(best)), std::abs(out.cv_error(i)));
        if (out.cv_error(i) < out.cv_error(best) - tie) best = i;
    }
    out.index = best;
    out.lambda = lambdas(best);
    out.fit = out.full.original(best);
    return out;
}

}  // namespace twostep
