#include <doctest.h>

#include <random>

#include "twostep/errors.hpp"
#include "twostep/rng.hpp"
#include "twostep/simulation.hpp"

using namespace twostep;

TEST_CASE("wishart p = 1 is a chi-square draw") {
    Rng rng = make_stream(1, {1});
    const int k = 7, draws = 10000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double w = sample_wishart(1, k, rng)(0, 0);
        sum += w;
        sq += w * w;
    }
    const double mean = sum / draws;
    CHECK(std::abs(mean - k) <= 0.05 * k);
    // Var(chi^2_k) = 2k
    const double var = sq / draws - mean * mean;
    CHECK(std::abs(var - 2.0 * k) <= 0.15 * 2.0 * k);
}

TEST_CASE("wishart first and second moments") {
    Rng rng = make_stream(2, {2});
    const int p = 3, df = 3, draws = 10000;
    Matrix mean = Matrix::Zero(p, p);
    double off_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const Matrix W = sample_wishart(p, df, rng).matrix();
        CHECK((W - W.transpose()).cwiseAbs().maxCoeff() == 0.0);
        mean += W;
        off_sq += W(0, 1) * W(0, 1);
    }
    mean /= draws;
    CHECK((mean - df * Matrix::Identity(p, p)).cwiseAbs().maxCoeff() <= 0.15);
    // Var(W_01) = df for identity scale
    CHECK(std::abs(off_sq / draws - df) <= 0.3);
}

TEST_CASE("wishart draws are reproducible and PSD") {
    Rng a = make_stream(9, {4, 2}), b = make_stream(9, {4, 2});
    const Matrix A = sample_wishart(6, 6, a).matrix(), B = sample_wishart(6, 6, b).matrix();
    CHECK(A == B);
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    Rng c = make_stream(9, {4, 3});
    CHECK(sample_wishart(6, 6, c).matrix() != A);
    CHECK_THROWS_AS(sample_wishart(4, 3, c), InputError);
}

namespace {

double corr(const Matrix& X) {
    const Vector a = X.col(0).array() - X.col(0).mean();
    const Vector b = X.col(1).array() - X.col(1).mean();
    return a.dot(b) / (a.norm() * b.norm());
}

}  // namespace

TEST_CASE("sample_design correlations") {
    Rng rng = make_stream(3, {});
    CHECK(std::abs(corr(sample_design(10000, Matrix::Identity(2, 2), rng))) < 0.05);
    Matrix S(2, 2);
    S << 1, 0.9, 0.9, 1;
    CHECK(std::abs(corr(sample_design(10000, S, rng)) - 0.9) < 0.05);
    Rng a = make_stream(4, {1}), b = make_stream(4, {1});
    CHECK(sample_design(20, S, a) == sample_design(20, S, b));
    // singular covariance takes the eigen fallback
    Matrix R = Matrix::Ones(3, 3);
    const Matrix X = sample_design(500, R, rng);
    CHECK((X.col(0) - X.col(1)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("covariance kinds") {
    Rng rng = make_stream(5, {});
    CovarianceSpec ar;
    ar.kind = CovarianceSpec::Kind::ar;
    ar.rho = 0.5;
    const Matrix A = covariance_matrix(ar, 4, rng);
    CHECK(A(0, 3) == 0.125);
    CHECK(A(2, 1) == 0.5);
    CovarianceSpec cs;
    cs.kind = CovarianceSpec::Kind::constant;
    cs.r = 0.3;
    const Matrix C = covariance_matrix(cs, 4, rng);
    CHECK(C(1, 3) == 0.3);
    CHECK(C(2, 2) == 1.0);
    CovarianceSpec bo;
    bo.kind = CovarianceSpec::Kind::block_orthogonal;
    bo.a = 2;
    const Matrix B = covariance_matrix(bo, 5, rng);
    CHECK(B(0, 1) == 0.6);
    CHECK(B(3, 4) == 0.6);
    CHECK(B(0, 3) == 0.0);
    CHECK(B(4, 1) == 0.0);
    CHECK(B(4, 4) == 1.0);
}

TEST_CASE("gen_beta specs") {
    Rng rng = make_stream(6, {});
    BetaSpec fixed;
    fixed.values = {7, 4, 2, 1, 1};
    const TrueModel f = gen_beta(fixed, 32, 5, 0.1, rng);
    Vector expect = Vector::Zero(32);
    expect.head(5) << 7, 4, 2, 1, 1;
    CHECK(f.beta_star == expect);
    CHECK(f.rho == 1.0);

    BetaSpec uni;
    uni.kind = BetaSpec::Kind::uniform;
    for (int t = 0; t < 50; ++t) {
        const TrueModel u = gen_beta(uni, 20, 8, 1.0, rng);
        CHECK(u.s == 8);
        for (int j : u.support.indices()) {
            CHECK(std::abs(u.beta_star(j)) >= 0.5);
            CHECK(std::abs(u.beta_star(j)) <= 2.0);
        }
    }

    BetaSpec tier;
    tier.kind = BetaSpec::Kind::tiered;
    tier.values = {2.5, 1.5, 0.5};
    tier.counts = {5, 5, 5};
    tier.placement = BetaSpec::Placement::random;
    const TrueModel t = gen_beta(tier, 200, 15, 2.25, rng);
    CHECK(t.rho == 0.5);
    CHECK(t.s == 15);
    CHECK(t.beta_star.sum() == doctest::Approx(22.5));
    CHECK(t.support.indices().back() > 14);  // not all in the first positions (this seed)

    tier.counts = {5, 5, 4};
    CHECK_THROWS_AS(gen_beta(tier, 200, 15, 1.0, rng), SpecMismatch);
    CHECK_THROWS_AS(gen_beta(fixed, 32, 4, 1.0, rng), SpecMismatch);
}

TEST_CASE("rpe and tp/fp") {
    Rng rng = make_stream(7, {});
    const Matrix Xt = sample_design(20000, Matrix::Identity(3, 3), rng);
    Vector b(3);
    b << 1, 0, -2;
    CHECK(rpe(b, b, Xt, 1.0) == 0.0);
    Vector e1 = b;
    e1(0) += 1.0;
    CHECK(std::abs(rpe(e1, b, Xt, 1.0) - 1.0) < 0.05);
    CHECK(rpe(e1, b, Xt, 4.0) == doctest::Approx(rpe(e1, b, Xt, 1.0) / 4.0));
    // zero fit: plug-in quadratic form
    const double q = b.dot((Xt.transpose() * Xt / 20000.0) * b);
    CHECK(rpe(Vector::Zero(3), b, Xt, 2.0) == doctest::Approx(q / 2.0).epsilon(1e-12));

    const SupportSet S({0, 2}, 5);
    Vector perfect = Vector::Zero(5);
    perfect(0) = 1;
    perfect(2) = 3;
    CHECK(tp_fp(perfect, S) == std::pair{2, 0});
    CHECK(tp_fp(Vector::Zero(5), S) == std::pair{0, 0});
    CHECK(tp_fp(Vector::Ones(5), S) == std::pair{2, 3});
}

TEST_CASE("median and bootstrap standard error") {
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 2, 3}) == 2.5);
    Rng rng = make_stream(8, {});
    CHECK(bootstrap_median_se(std::vector<double>(30, 1.5), 200, rng) == 0.0);
    std::vector<double> v;
    std::normal_distribution<double> N;
    for (int i = 0; i < 400; ++i) v.push_back(N(rng));
    // asymptotic SE of the normal median: sqrt(pi / 2 / n)
    const double se = bootstrap_median_se(v, 400, rng);
    CHECK(se == doctest::Approx(std::sqrt(M_PI / 2.0 / 400.0)).epsilon(0.3));
}

TEST_CASE("population eta_inf") {
    CovarianceSpec id;
    Rng rng = make_stream(9, {});
    const Matrix I = covariance_matrix(id, 4, rng);
    const SignVector plus(std::vector<std::int8_t>{1, 1});
    CHECK(eta_infinity_population(I, SupportSet({0, 1}, 4), plus) == 1.0);
    Matrix S = Matrix::Identity(3, 3);
    S(0, 2) = S(2, 0) = 0.6;
    S(1, 2) = S(2, 1) = 0.6;
    S(2, 2) = 2.0 * 0.36 + 0.1;
    // corr(x3, x1) = 0.6 / sqrt(0.82)
    const double expect = 1.0 - 1.2 / std::sqrt(0.82);
    CHECK(eta_infinity_population(S, SupportSet({0, 1}, 3), plus) == doctest::Approx(expect));
}

TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hit(1000, 0);
    parallel_for(1000, 4, [&](int i) { hit[i] += 1; });
    for (int h : hit) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](int i) {
                        if (i == 7) throw InputError("boom");
                    }),
                    InputError);
}

namespace {

ExperimentConfig small_selection() {
    ExperimentConfig c;
    c.n = 40;
    c.p = 8;
    c.s = 3;
    c.covariance.kind = CovarianceSpec::Kind::wishart;
    c.beta.values = {2, -1.5, 1};
    c.sigma2 = 0.2;
    c.outer = 4;
    c.inner = 5;
    c.methods = {"Lasso", "NG-Ridge", "ALasso-OLS", "HT-Ridge"};
    c.grid_size = 40;
    c.seed = 3;
    return c;
}

}  // namespace

TEST_CASE("selection experiment is independent of the worker count") {
    const ExperimentConfig c = small_selection();
    const SelectionResult a = run_selection_experiment(c, 1);
    const SelectionResult b = run_selection_experiment(c, 4);
    REQUIRE(a.per_design.size() == b.per_design.size());
    for (std::size_t i = 0; i < a.per_design.size(); ++i) {
        CHECK(a.per_design[i].successes == b.per_design[i].successes);
        CHECK(std::memcmp(&a.per_design[i].eta_inf, &b.per_design[i].eta_inf, sizeof(double)) == 0);
    }
    for (const auto& m : a.overall) {
        CHECK(m.success_rate >= 0.0);
        CHECK(m.success_rate <= 1.0);
        CHECK(m.valid + m.failures == c.outer * c.inner);
    }
}

TEST_CASE("selection experiment limits") {
    ExperimentConfig c = small_selection();
    c.covariance.kind = CovarianceSpec::Kind::identity;
    c.sigma2 = 1e-8;
    c.beta.values = {3, -3, 3};
    c.methods = {"HT-Ridge", "ALasso-Ridge"};
    for (const auto& m : run_selection_experiment(c).overall) CHECK(m.success_rate == 1.0);

    c.s = 0;
    c.beta.values = {};
    for (const auto& m : run_selection_experiment(c).overall) CHECK(m.success_rate == 1.0);

    ExperimentConfig wide = small_selection();
    wide.n = 6;
    wide.p = 10;
    wide.methods = {"HT-OLS", "HT-Ridge"};
    wide.inner_resamples_design = true;
    const SelectionResult r = run_selection_experiment(wide);
    CHECK(r.overall[0].not_applicable);
    CHECK(!r.overall[1].not_applicable);
}

TEST_CASE("config validation lists every offending field") {
    ExperimentConfig c = small_selection();
    c.s = 20;
    c.sigma2 = -1;
    c.outer = 0;
    c.methods = {"Lasso", "Bogus-Thing"};
    const auto bad = c.problems();
    CHECK(bad.size() >= 4);
    CHECK_THROWS_AS(run_selection_experiment(c), InputError);
}

TEST_CASE("prediction experiment summaries") {
    ExperimentConfig c;
    c.kind = ExperimentKind::prediction;
    c.n = 40;
    c.p = 12;
    c.s = 3;
    c.covariance.kind = CovarianceSpec::Kind::ar;
    c.covariance.rho = 0.5;
    c.beta.kind = BetaSpec::Kind::tiered;
    c.beta.values = {2, 1};
    c.beta.counts = {2, 1};
    c.beta.placement = BetaSpec::Placement::random;
    c.sigma2 = 1.0;
    c.outer = 6;
    c.n_test = 300;
    c.lambda_rule = LambdaRule::cv;
    c.methods = {"Lasso", "HT-Ridge"};
    c.grid_size = 30;
    c.bootstrap = 50;
    const PredictionResult a = run_prediction_experiment(c, 1);
    const PredictionResult b = run_prediction_experiment(c, 3);
    REQUIRE(a.summary.size() == 2);
    for (std::size_t m = 0; m < 2; ++m) {
        CHECK(a.summary[m].median_rpe == b.summary[m].median_rpe);
        CHECK(a.summary[m].rpe_se == b.summary[m].rpe_se);
        CHECK(a.summary[m].median_tp <= 3);
        CHECK(a.summary[m].median_fp <= 9);
        CHECK(a.summary[m].replications == 6);
    }
}

TEST_CASE("alasso normality statistic is reproducible") {
    NormalityCheck cfg;
    cfg.replications = 50;
    const NormalityResult a = run_alasso_normality(cfg), b = run_alasso_normality(cfg);
    CHECK(a.statistics == b.statistics);
    CHECK(a.w2 > 0.0);
    CHECK(a.lambda == doctest::Approx(1.0 / 400.0));
}
