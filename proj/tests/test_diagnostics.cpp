#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "twostep/diagnostics.hpp"
#include "twostep/errors.hpp"
#include "twostep/selectors.hpp"

using namespace twostep;

namespace {

Matrix ortho(int n, int p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return oracle::orthonormal_design(n, p, rng);
}

Dataset x_only(const Matrix& X) { return Dataset{X, Vector::Zero(X.rows()), std::nullopt}; }

SignVector plus(int k) { return SignVector(std::vector<std::int8_t>(static_cast<std::size_t>(k), 1)); }

InitialEstimate init_of(const Vector& b) {
    InitialEstimate e;
    e.beta = b;
    return e;
}

}  // namespace

TEST_CASE("eta_inf examples") {
    const Matrix X = ortho(20, 4, 1);
    CHECK(eta_infinity(x_only(X), SupportSet({0, 1}, 4), plus(2)) == doctest::Approx(1.0));

    Matrix D(20, 3);
    D << X.col(0), X.col(1), X.col(0);
    CHECK(std::abs(eta_infinity(x_only(D), SupportSet({0, 1}, 3), plus(2))) < 1e-12);

    Matrix T(20, 3);
    T << X.col(0), X.col(1), 0.6 * X.col(0) + 0.6 * X.col(1);
    CHECK(eta_infinity(x_only(T), SupportSet({0, 1}, 3), plus(2)) == doctest::Approx(-0.2).epsilon(1e-12));

    CHECK(eta_infinity(x_only(X), SupportSet::all(4), plus(4)) == 1.0);
    CHECK_THROWS_AS(eta_infinity(x_only(D), SupportSet({0, 2}, 3), plus(2)), SingularMatrix);
}

TEST_CASE("eta_inf is invariant to a common column scale after standardization") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> N;
    Matrix X(30, 6);
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 6; ++j) X(i, j) = N(rng) + 0.5 * (j ? X(i, j - 1) : 0.0);
    const SupportSet S({0, 2, 3}, 6);
    const SignVector sg(std::vector<std::int8_t>{1, -1, 1});
    const double a = eta_infinity(standardize(make_dataset(X, Vector::Zero(30))), S, sg);
    const double b = eta_infinity(standardize(make_dataset(7.5 * X, Vector::Zero(30))), S, sg);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("design constants") {
    const Matrix X = ortho(25, 5, 3);
    const DesignConstants c = design_constants(x_only(X), SupportSet({1, 3}, 5));
    CHECK(c.c_max < 1e-12);
    CHECK(c.lambda_min == doctest::Approx(1.0));

    Matrix D(25, 3);
    D << X.col(0), X.col(1), X.col(0);
    CHECK(design_constants(x_only(D), SupportSet({0, 1}, 3)).c_max == doctest::Approx(1.0));

    const Matrix S2 = std::sqrt(2.0) * X;
    CHECK(design_constants(x_only(S2), SupportSet::all(5)).lambda_min == doctest::Approx(2.0));
}

TEST_CASE("design diagnostics report") {
    const Matrix X = ortho(25, 5, 4);
    Vector b = Vector::Zero(5);
    b(0) = 2;
    b(3) = -0.5;
    const DesignDiagnostics dd = design_diagnostics(x_only(X), b);
    CHECK(dd.eta_inf == doctest::Approx(1.0));
    CHECK(dd.c_max < 1e-12);
    CHECK(dd.rho_n == 0.5);
    CHECK(dd.lambda_min == doctest::Approx(1.0));
    CHECK(dd.eta_inf <= 1.0);
    CHECK(dd.max_row_norm > 0.0);
}

TEST_CASE("spectral tail residual") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N;
    Matrix X(20, 4);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 4; ++j) X(i, j) = N(rng);
    Vector b(4);
    b << 1, -2, 0, 3;
    const Assumption2Report full = assumption2_report(x_only(X), b);
    CHECK(full.q == 4);
    CHECK(*full.xi_hat == 0.0);
    CHECK(full.singular_values.size() == 4);

    // beta in the row space of a wide design
    Matrix W(2, 3);
    W << 1, 2, 0, 0, 1, 1;
    const Vector in_row = W.transpose() * Vector::Ones(2);
    const Assumption2Report r1 = assumption2_report(x_only(W), in_row);
    CHECK(r1.q == 2);
    CHECK(*r1.xi_hat <= 1e-10);

    // unit vector orthogonal to the row space
    Vector null(3);
    null << 2, -1, 1;
    null.normalize();
    CHECK((W * null).cwiseAbs().maxCoeff() < 1e-14);
    const Assumption2Report r2 = assumption2_report(x_only(W), null);
    CHECK(*r2.xi_hat == doctest::Approx(null.cwiseAbs().maxCoeff()).epsilon(1e-10));

    // xi_hat = 0 means beta is reproduced by its projection on the leading eigenvectors
    const Assumption2Report none = assumption2_report(x_only(W), std::nullopt);
    CHECK(!none.xi_hat);
    CHECK(none.theta.size() == 0);
}

TEST_CASE("oracle variance") {
    const Matrix X = ortho(20, 3, 6);
    Vector e1(1);
    e1 << 1.0;
    CHECK(oracle_variance(x_only(X), SupportSet({0}, 3), 1.0, e1) == doctest::Approx(1.0));
    CHECK(oracle_variance(x_only(X), SupportSet({0, 1}, 3), 1.0, Vector::Zero(2)) == 0.0);

    Matrix G(2, 2);
    G << 1, 0.5, 0.5, 1;
    const Matrix X2 = std::sqrt(2.0) * Matrix(G.llt().matrixU());
    Vector v(2);
    v << 1, 0;
    CHECK(oracle_variance(x_only(X2), SupportSet::all(2), 1.0, v) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    Vector big(2);
    big << 1, 1;
    CHECK_THROWS_AS(oracle_variance(x_only(X2), SupportSet::all(2), 1.0, big), InputError);
}

TEST_CASE("certificates: noiseless orthonormal design and full shrinkage") {
    const Matrix X = ortho(30, 4, 7);
    Vector b(4);
    b << 3, -2, 0, 0;
    const Dataset d = make_dataset(X, X * b);
    const InitialEstimate ols = fit_ols(d);
    const Vector eps = Vector::Zero(30);
    for (double lam : {1e-3, 0.1}) {
        CHECK(certify_garrote(d, ols, b, lam, eps).recovers_signs());
        CHECK(certify_alasso(d, ols, b, lam, eps).recovers_signs());
    }
    const double lg = garrote_lambda_max(d, ols), la = alasso_lambda_max(d, ols);
    CHECK(!certify_garrote(d, ols, b, 1.5 * lg, eps).no_underselection);
    CHECK(!certify_alasso(d, ols, b, 1.5 * la, eps).no_underselection);
}

TEST_CASE("certificate truth equals solver sign recovery on random instances") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> N;
    std::uniform_int_distribution<int> P(2, 6);
    int positives = 0;
    for (int t = 0; t < 200; ++t) {
        const int p = P(rng);
        const int n = p + 5 + t % 20;
        Matrix X(n, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) X(i, j) = N(rng) + 0.3 * (j ? X(i, j - 1) : 0.0);
        Vector b = Vector::Zero(p);
        for (int j = 0; j < p; ++j)
            if (j % 2 == 0 || t % 3 == 0) b(j) = (N(rng) > 0 ? 1.0 : -1.0) * (0.5 + std::abs(N(rng)));
        Vector eps(n);
        for (int i = 0; i < n; ++i) eps(i) = 0.5 * N(rng);
        const Dataset d = make_dataset(X, X * b + eps);
        const InitialEstimate init = fit_ridge(d, 0.05);
        const SignVector truth = sign_pattern(b, 0.0);

        const Vector gg = default_lambda_grid(garrote_lambda_max(d, init), 40, 1e-3);
        const PathSolution pg = garrote_path(d, init, gg);
        for (int i = 0; i < pg.size(); ++i) {
            const bool cert = certify_garrote(d, init, b, gg(i), eps).recovers_signs();
            CHECK(cert == (pg.signs[i] == truth));
            positives += cert;
        }
        const Vector ga = default_lambda_grid(alasso_lambda_max(d, init), 40, 1e-3);
        const PathSolution pa = alasso_path(d, init, ga);
        for (int i = 0; i < pa.size(); ++i) {
            const bool cert = certify_alasso(d, init, b, ga(i), eps).recovers_signs();
            CHECK(cert == (pa.signs[i] == truth));
            positives += cert;
        }
    }
    CHECK(positives > 100);
}

TEST_CASE("certificates with an empty true support") {
    const Matrix X = ortho(20, 3, 9);
    std::mt19937_64 rng(10);
    std::normal_distribution<double> N;
    Vector eps(20);
    for (int i = 0; i < 20; ++i) eps(i) = N(rng);
    const Dataset d = make_dataset(X, eps);
    const InitialEstimate init = fit_ols(d);
    const Vector zero = Vector::Zero(3);
    const double lg = garrote_lambda_max(d, init);
    CHECK(certify_garrote(d, init, zero, 1.01 * lg, eps).holds());
    CHECK(!certify_garrote(d, init, zero, 0.5 * lg, eps).holds());
    const double la = alasso_lambda_max(d, init);
    CHECK(certify_alasso(d, init, zero, 1.01 * la, eps).holds());
    CHECK(!certify_alasso(d, init, zero, 0.5 * la, eps).holds());
}
