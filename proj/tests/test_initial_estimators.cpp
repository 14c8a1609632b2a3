#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "twostep/errors.hpp"
#include "twostep/initial_estimators.hpp"

using namespace twostep;

namespace {

Dataset orthonormal_dataset(int n, int p, std::uint64_t seed, double noise = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N;
    const Matrix X = oracle::orthonormal_design(n, p, rng);
    Vector beta(p);
    for (int j = 0; j < p; ++j) beta(j) = (j % 2 ? -1.0 : 1.0) * (0.2 + 0.3 * j);
    Vector y = X * beta;
    for (int i = 0; i < n; ++i) y(i) += noise * N(rng);
    return make_dataset(X, y);
}

Dataset random_dataset(int n, int p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N;
    Matrix X(n, p);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) X(i, j) = N(rng) + 0.3 * (j > 0 ? X(i, j - 1) : 0.0);
        y(i) = 2.0 * X(i, 0) - X(i, p - 1) + N(rng);
    }
    return make_dataset(X, y);
}

}  // namespace

TEST_CASE("OLS: orthonormal design and noiseless recovery") {
    const Dataset d = orthonormal_dataset(30, 5, 1);
    const InitialEstimate ols = fit_ols(d);
    const Vector direct = d.X.transpose() * d.y / 30.0;
    CHECK((ols.beta - direct).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(ols.method == InitialMethod::ols);

    const Dataset r = random_dataset(40, 6, 2);
    Vector bstar(6);
    bstar << 1, -2, 0, 0.5, 3, -1;
    const Dataset clean = make_dataset(r.X, r.X * bstar);
    CHECK((fit_ols(clean).beta - bstar).cwiseAbs().maxCoeff() < 1e-10);

    const InitialEstimate o2 = fit_ols(r);
    CHECK((r.X.transpose() * (r.y - r.X * o2.beta) / 40.0).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("OLS: collinear and wide designs are singular") {
    Matrix X(5, 2);
    X << 1, 2, 2, 4, 3, 6, 4, 8, 5, 10;
    CHECK_THROWS_AS(fit_ols(make_dataset(X, Vector::Ones(5))), SingularMatrix);
    const Dataset wide = random_dataset(5, 8, 3);
    CHECK_THROWS_AS(fit_ols(wide), SingularMatrix);
}

TEST_CASE("univariate estimator") {
    const Dataset d = orthonormal_dataset(25, 4, 4);
    CHECK((fit_univariate(d).beta - fit_ols(d).beta).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(fit_univariate(make_dataset(d.X, Vector::Zero(25))).beta.isZero(0.0));

    Matrix X(4, 2);
    X << 1, 1, 1, 1, -1, -1, -1, -1;
    Vector y(4);
    y << 2, 2, -2, -2;
    const Vector b = fit_univariate(make_dataset(X, y)).beta;
    // (1/4) * (2 + 2 + 2 + 2)
    CHECK(b(0) == 2.0);
    CHECK(b(1) == 2.0);
}

TEST_CASE("ridge: orthonormal shrinkage and optimality") {
    const Dataset d = orthonormal_dataset(30, 5, 5);
    const Vector ols = fit_ols(d).beta;
    for (double nu : {1e-3, 0.1, 1.0, 7.5}) {
        const InitialEstimate r = fit_ridge(d, nu);
        CHECK((r.beta - ols / (1.0 + nu)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(*r.tuning == nu);
    }
    const Dataset g = random_dataset(20, 7, 6);
    const Matrix G = g.X.transpose() * g.X / 20.0;
    const Vector c = g.X.transpose() * g.y / 20.0;
    const InitialEstimate r = fit_ridge(g, 0.3);
    CHECK(((G + 0.3 * Matrix::Identity(7, 7)) * r.beta - c).cwiseAbs().maxCoeff() <= 1e-10);
    const InitialEstimate big = fit_ridge(g, 1e6);
    CHECK(big.beta.cwiseAbs().maxCoeff() <= 1e-3 * c.cwiseAbs().maxCoeff());
    CHECK_THROWS_AS(fit_ridge(g, 0.0), InputError);
}

TEST_CASE("ridge: 2x2 closed form") {
    // X with (1/n) X^T X = [[1, .5], [.5, 1]] and (1/n) X^T y = (1, 1).
    Matrix G(2, 2);
    G << 1, 0.5, 0.5, 1;
    const int n = 2;
    const Matrix X = std::sqrt(double(n)) * Matrix(G.llt().matrixU());
    Vector c(2);
    c << 1, 1;
    const Vector y = n * X.transpose().fullPivLu().solve(c);
    const Vector b = fit_ridge(make_dataset(X, y), 0.5).beta;
    CHECK(b(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ridge: dual form for p > n agrees with the primal normal equations") {
    const Dataset g = random_dataset(8, 20, 7);
    const Matrix G = g.X.transpose() * g.X / 8.0;
    const Vector c = g.X.transpose() * g.y / 8.0;
    for (double nu : {1e-4, 0.05, 2.0}) {
        const Vector b = fit_ridge(g, nu).beta;
        const Vector primal = (G + nu * Matrix::Identity(20, 20)).ldlt().solve(c);
        CHECK((b - primal).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("ridge norm shrinks monotonically in nu") {
    const Dataset g = random_dataset(30, 6, 8);
    double prev = std::numeric_limits<double>::infinity();
    for (double nu = 1e-4; nu < 1e3; nu *= 1.7) {
        const double norm = fit_ridge(g, nu).beta.norm();
        CHECK(norm <= prev + 1e-14);
        prev = norm;
    }
}

namespace {

// GCV from an explicitly formed hat matrix.
double gcv_oracle(const Dataset& d, double nu) {
    const double n = d.n();
    const Matrix H = d.X * (d.X.transpose() * d.X + n * nu * Matrix::Identity(d.p(), d.p())).inverse() * d.X.transpose();
    const Vector r = d.y - H * d.y;
    const double den = 1.0 - H.trace() / n;
    return r.squaredNorm() / n / (den * den);
}

}  // namespace

TEST_CASE("GCV scores agree with the explicit hat-matrix formula") {
    for (auto [n, p] : {std::pair{30, 5}, std::pair{12, 20}}) {
        const Dataset g = random_dataset(n, p, 9 + p);
        const Vector grid = default_nu_grid();
        const GcvSelection sel = select_ridge_gcv(g, grid);
        Eigen::Index best = 0;
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            const double o = gcv_oracle(g, grid(i));
            CHECK(sel.scores(i) == doctest::Approx(o).epsilon(1e-8));
            if (o <= sel.scores(best)) best = i;  // later (larger nu) wins ties
        }
        CHECK(sel.nu == grid(best));
        CHECK((sel.estimate.beta - fit_ridge(g, sel.nu).beta).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("GCV orthonormal p = 2 closed form matches dense brute force") {
    const Dataset d = orthonormal_dataset(20, 2, 10, 0.8);
    const double n = 20;
    const Vector ols = fit_ols(d).beta;
    Vector grid = Vector::LinSpaced(400, 0.001, 2.0);
    const GcvSelection sel = select_ridge_gcv(d, grid);
    double best_nu = 0, best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double nu = grid(i);
        const Vector r = d.y - d.X * ols / (1.0 + nu);
        const double den = 1.0 - (2.0 / (1.0 + nu)) / n;
        const double score = r.squaredNorm() / n / (den * den);
        CHECK(sel.scores(i) == doctest::Approx(score).epsilon(1e-10));
        if (score <= best) {
            best = score;
            best_nu = nu;
        }
    }
    CHECK(sel.nu == best_nu);
}

TEST_CASE("GCV edge cases") {
    const Dataset g = random_dataset(25, 4, 11);
    Vector one(1);
    one << 0.37;
    CHECK(select_ridge_gcv(g, one).nu == 0.37);

    Vector bstar(4);
    bstar << 1, -1, 2, 0.5;
    const Dataset clean = make_dataset(g.X, g.X * bstar);
    const Vector grid = default_nu_grid();
    CHECK(select_ridge_gcv(clean, grid).nu == grid.minCoeff());

    const Dataset square = random_dataset(3, 3, 12);
    Vector tiny(1);
    tiny << 1e-14;
    CHECK_THROWS_AS(select_ridge_gcv(square, tiny), DegenerateGCV);
}

TEST_CASE("default grids") {
    const Vector nu = default_nu_grid();
    CHECK(nu.size() == 50);
    CHECK(nu.minCoeff() == doctest::Approx(1e-4));
    CHECK(nu.maxCoeff() == doctest::Approx(1e2));
    const Vector lam = default_lambda_grid(2.0);
    CHECK(lam.size() == 100);
    CHECK(lam(0) == 2.0);
    CHECK(lam(99) == doctest::Approx(2e-3));
}

TEST_CASE("lasso: full shrinkage at lambda_max and first entry") {
    const Dataset g = standardize(random_dataset(40, 6, 13));
    const double lmax = lasso_lambda_max(g);
    CHECK(lmax == doctest::Approx((g.X.transpose() * g.y / 40.0).cwiseAbs().maxCoeff()));
    Vector grid(3);
    grid << 2 * lmax, lmax, lmax * (1 - 1e-9);
    const PathSolution path = lasso_path(g, grid);
    CHECK(path.coefficients[0].isZero(0.0));
    CHECK(path.coefficients[1].isZero(0.0));
    Eigen::Index arg;
    (g.X.transpose() * g.y).cwiseAbs().maxCoeff(&arg);
    CHECK(path.supports[2].indices() == std::vector<int>{static_cast<int>(arg)});
}

TEST_CASE("lasso: orthonormal soft-threshold closed form") {
    const Dataset d = orthonormal_dataset(40, 6, 14);
    const Vector ols = fit_ols(d).beta;
    const Vector grid = default_lambda_grid(lasso_lambda_max(d), 20, 1e-2);
    const PathSolution path = lasso_path(d, grid);
    const auto pr = oracle::Problem::from(d.X, d.y, Vector::Ones(6), false);
    for (int i = 0; i < path.size(); ++i) {
        for (int j = 0; j < 6; ++j) CHECK(std::abs(path.coefficients[i](j) - soft_threshold(ols(j), grid(i))) < 1e-10);
        CHECK((oracle::proximal_gradient(pr, grid(i)) - path.coefficients[i]).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("lasso: KKT conditions and objective against the proximal-gradient oracle") {
    for (int t = 0; t < 20; ++t) {
        const int p = 2 + t % 7;
        const Dataset g = standardize(random_dataset(15 + t, p, 100 + t));
        const Vector grid = default_lambda_grid(lasso_lambda_max(g), 25, 1e-3);
        const PathSolution path = lasso_path(g, grid);
        const auto pr = oracle::Problem::from(g.X, g.y, Vector::Ones(p), false);
        for (int i = 0; i < path.size(); ++i) {
            const Vector& b = path.coefficients[i];
            const Vector grad = g.X.transpose() * (g.y - g.X * b) / g.n();
            for (int j = 0; j < p; ++j) {
                CHECK(std::abs(grad(j)) <= grid(i) + 1e-7);
                if (b(j) != 0.0) CHECK(std::abs(grad(j) - grid(i) * (b(j) > 0 ? 1.0 : -1.0)) <= 1e-7);
            }
            const Vector ref = oracle::proximal_gradient(pr, grid(i));
            CHECK(std::abs(pr.objective(b, grid(i)) - pr.objective(ref, grid(i))) <= 1e-9);
        }
    }
}

TEST_CASE("lasso: iteration cap surfaces as MaxIterations with its lambda") {
    const Dataset g = standardize(random_dataset(30, 8, 15));
    CdOptions tight;
    tight.sweeps_per_coordinate = 0;
    tight.polish = false;
    Vector grid(1);
    grid << 0.01;
    try {
        lasso_path(g, grid, tight);
        FAIL("expected MaxIterations");
    } catch (const MaxIterations& e) {
        CHECK(e.lambda() == 0.01);
    }
}

TEST_CASE("method names round-trip") {
    for (auto m : {InitialMethod::ols, InitialMethod::univariate, InitialMethod::ridge, InitialMethod::lasso})
        CHECK(parse_initial_method(to_string(m)) == m);
    CHECK(parse_initial_method("univ") == InitialMethod::univariate);
    CHECK_THROWS_AS(parse_initial_method("elastic"), InputError);
}
