#include "twostep/sweep.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "twostep/errors.hpp"
#include "twostep/rng.hpp"
#include "twostep/simulation.hpp"

namespace twostep {

namespace {

constexpr std::uint64_t kSplitTag = 0x53504c54u;

Dataset take_rows(const Dataset& d, const std::vector<int>& rows, std::size_t from, std::size_t to) {
    Dataset out;
    out.X.resize(static_cast<Eigen::Index>(to - from), d.p());
    out.y.resize(static_cast<Eigen::Index>(to - from));
    for (std::size_t r = from; r < to; ++r) {
        out.X.row(static_cast<Eigen::Index>(r - from)) = d.X.row(rows[r]);
        out.y(static_cast<Eigen::Index>(r - from)) = d.y(rows[r]);
    }
    return out;
}

}  // namespace

int nearest_support_index(const PathSolution& path, int k) {
    if (path.size() == 0) throw InputError("empty path");
    int best = 0;
    int best_gap = std::numeric_limits<int>::max();
    for (int i = 0; i < path.size(); ++i) {
        const int gap = std::abs(path.supports[static_cast<std::size_t>(i)].size() - k);
        if (gap <= best_gap) {
            best = i;
            best_gap = gap;
        }
    }
    return best;
}

SweepResult sparsity_sweep(const Dataset& d, const SweepOptions& options, int workers) {
    d.validate();
    if (options.n_train < 2 || options.n_train >= d.n())
        throw InputError("training size must be in [2, n - 1] (n = " + std::to_string(d.n()) + ")");
    if (options.splits < 1) throw InputError("need at least one split");
    if (options.max_size < 1 || options.max_size > d.p()) throw InputError("sparsity levels must lie in [1, p]");
    if (options.methods.empty()) throw InputError("no methods given");

    std::vector<MethodSpec> specs;
    for (const auto& label : options.methods) {
        MethodSpec s = parse_method_label(label);
        s.grid_size = options.grid_size;
        specs.push_back(s);
    }
    const int m = static_cast<int>(specs.size());
    const int K = options.max_size;

    SweepResult out;
    out.methods = options.methods;
    for (int k = 1; k <= K; ++k) out.sizes.push_back(k);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.mse.assign(static_cast<std::size_t>(options.splits),
                   std::vector<std::vector<double>>(static_cast<std::size_t>(m),
                                                    std::vector<double>(static_cast<std::size_t>(K), nan)));

    parallel_for(options.splits, workers, [&](int split) {
        std::vector<int> perm(static_cast<std::size_t>(d.n()));
        std::iota(perm.begin(), perm.end(), 0);
        Rng rng = make_stream(options.seed, {kSplitTag, static_cast<std::uint64_t>(split)});
        std::shuffle(perm.begin(), perm.end(), rng);
        const Dataset train = take_rows(d, perm, 0, static_cast<std::size_t>(options.n_train));
        const Dataset test = take_rows(d, perm, static_cast<std::size_t>(options.n_train), perm.size());
        for (int mi = 0; mi < m; ++mi) {
            auto& slot = out.mse[static_cast<std::size_t>(split)][static_cast<std::size_t>(mi)];
            try {
                const MethodFit fit = fit_method_path(
                    train, specs[static_cast<std::size_t>(mi)], std::nullopt,
                    derive_seed(options.seed, {kSplitTag, static_cast<std::uint64_t>(split), static_cast<std::uint64_t>(mi)}));
                for (int k = 1; k <= K; ++k) {
                    const LinearFit lf = fit.original(nearest_support_index(fit.path, k));
                    const Vector resid = (test.y - test.X * lf.beta).array() - lf.intercept;
                    slot[static_cast<std::size_t>(k - 1)] = resid.squaredNorm() / test.n();
                }
            } catch (const Error&) {
                // left as NaN and counted below
            }
        }
    });

    out.mean_mse = Matrix::Zero(K, m);
    out.failures.assign(static_cast<std::size_t>(m), 0);
    for (int mi = 0; mi < m; ++mi) {
        int used = 0;
        for (int s = 0; s < options.splits; ++s) {
            const auto& v = out.mse[static_cast<std::size_t>(s)][static_cast<std::size_t>(mi)];
            if (std::isnan(v[0])) {
                ++out.failures[static_cast<std::size_t>(mi)];
                continue;
            }
            ++used;
            for (int k = 0; k < K; ++k) out.mean_mse(k, mi) += v[static_cast<std::size_t>(k)];
        }
        if (used > 0) out.mean_mse.col(mi) /= used;
        else out.mean_mse.col(mi).setConstant(nan);
    }
    return out;
}

TextTable sweep_table(const SweepResult& r) {
    TextTable t;
    t.header.push_back("sparsity");
    for (const auto& m : r.methods) t.header.push_back(m);
    for (std::size_t k = 0; k < r.sizes.size(); ++k) {
        std::vector<std::string> row{std::to_string(r.sizes[k])};
        for (Eigen::Index mi = 0; mi < r.mean_mse.cols(); ++mi)
            row.push_back(format_double(r.mean_mse(static_cast<Eigen::Index>(k), mi)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace twostep
