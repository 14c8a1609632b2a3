#include "twostep/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "twostep/errors.hpp"

namespace twostep {

namespace {

struct Blocks {
    Matrix gram_SS;   // (1/n) A_S^T A_S
    Matrix gram_ScS;  // (1/n) A_Sc^T A_S
};

Blocks gram_blocks(const Matrix& A, const SupportSet& S) {
    const double n = static_cast<double>(A.rows());
    const Matrix AS = select_columns(A, S.indices());
    const Matrix ASc = select_columns(A, S.complement().indices());
    Blocks b;
    b.gram_SS = SymmetricMatrix::gram(AS).matrix();
    b.gram_ScS = ASc.transpose() * AS / n;
    return b;
}

void require_support(const Dataset& d, const SupportSet& S) {
    d.validate();
    if (S.dimension() != d.p()) throw InputError("support dimension does not match design");
    if (S.empty()) throw InputError("support must be nonempty");
}

}  // namespace

double eta_infinity(const Dataset& d, const SupportSet& S, const SignVector& signs_on_S) {
    require_support(d, S);
    if (signs_on_S.size() != S.size()) throw InputError("sign vector must be restricted to S");
    const Blocks b = gram_blocks(d.X, S);
    const Vector v = solve_spd(SymmetricMatrix(b.gram_SS), signs_on_S.as_vector());
    return 1.0 - inf_norm(Vector(b.gram_ScS * v));
}

DesignConstants design_constants(const Dataset& d, const SupportSet& S) {
    require_support(d, S);
    const Blocks b = gram_blocks(d.X, S);
    const SymmetricMatrix GSS(b.gram_SS);
    DesignConstants c;
    if (b.gram_ScS.rows() > 0) {
        const Matrix W = solve_spd(GSS, Matrix(b.gram_ScS.transpose()));
        c.c_max = matrix_inf_norm(W.transpose());
    } else {
        solve_spd(GSS, Vector(Vector::Zero(GSS.dim())));  // still reject singular X_S
    }
    c.lambda_min = eigh(GSS).eigenvalues.minCoeff();
    return c;
}

DesignDiagnostics design_diagnostics(const Dataset& d, const Vector& beta_star) {
    if (beta_star.size() != d.p()) throw InputError("beta* length does not match design");
    const TrueModel truth = TrueModel::from_beta(beta_star, 1.0);
    const SupportSet& S = truth.support;
    DesignDiagnostics out;
    out.eta_inf = eta_infinity(d, S, sign_pattern(beta_star, 0.0).restricted(S));
    const DesignConstants c = design_constants(d, S);
    out.c_max = c.c_max;
    out.lambda_min = c.lambda_min;
    out.rho_n = truth.rho;
    const Matrix XS = select_columns(d.X, S.indices());
    out.max_row_norm = XS.rowwise().norm().maxCoeff() / std::sqrt(static_cast<double>(d.n()));
    return out;
}

Assumption2Report assumption2_report(const Dataset& d, const std::optional<Vector>& beta_star, double rank_tol) {
    d.validate();
    const SpectralDecomposition eig = eigh(SymmetricMatrix::gram(d.X), rank_tol);
    Assumption2Report rep;
    rep.q = eig.rank;
    rep.singular_values = eig.eigenvalues.head(rep.q);
    if (beta_star) {
        if (beta_star->size() != d.p()) throw InputError("beta* length does not match design");
        rep.theta = eig.eigenvectors.transpose() * *beta_star;
        const int tail = d.p() - rep.q;
        if (tail == 0) {
            rep.xi_hat = 0.0;
        } else {
            const Vector resid = eig.eigenvectors.rightCols(tail) * rep.theta.tail(tail);
            rep.xi_hat = inf_norm(resid);
        }
    }
    return rep;
}

namespace {

struct ZBlocks {
    SupportSet S;
    Matrix ZS, ZSc;
    SymmetricMatrix GS;  // (1/n) Z_S^T Z_S
    Matrix GScS;         // (1/n) Z_Sc^T Z_S
};

ZBlocks z_blocks(const Dataset& d, const InitialEstimate& init, const SupportSet& S) {
    const Matrix Z = d.X * init.beta.asDiagonal();
    const double n = d.n();
    Matrix ZS = select_columns(Z, S.indices());
    Matrix ZSc = select_columns(Z, S.complement().indices());
    Matrix GS = SymmetricMatrix::gram(ZS).matrix();
    Matrix GScS = ZSc.transpose() * ZS / n;
    return ZBlocks{S, std::move(ZS), std::move(ZSc), SymmetricMatrix(std::move(GS)), std::move(GScS)};
}

void check_certificate_inputs(const Dataset& d, const InitialEstimate& init, const Vector& beta_star,
                              double lambda, const Vector& noise) {
    d.validate();
    if (init.beta.size() != d.p() || beta_star.size() != d.p()) throw InputError("coefficient length mismatch");
    if (noise.size() != d.n()) throw InputError("noise length does not match n");
    if (!(lambda > 0.0)) throw InputError("lambda must be positive");
}

}  // namespace

SignRecoveryCertificate certify_garrote(const Dataset& d, const InitialEstimate& init, const Vector& beta_star,
                                        double lambda, const Vector& noise, double tol) {
    check_certificate_inputs(d, init, beta_star, lambda, noise);
    const SupportSet S = support_of(beta_star, 0.0);
    const double n = d.n();
    SignRecoveryCertificate cert;
    cert.method = SelectorKind::garrote;

    if (S.empty()) {
        cert.no_underselection = true;
        cert.underselection_margin = std::numeric_limits<double>::infinity();
        const Vector lhs = d.X.transpose() * noise / n;
        const Vector z_lhs = init.beta.cwiseProduct(lhs);
        cert.overselection_margin = lambda - z_lhs.maxCoeff();
        cert.no_overselection = cert.overselection_margin >= -tol;
        return cert;
    }

    const ZBlocks z = z_blocks(d, init, S);
    const Matrix XS = select_columns(d.X, S.indices());
    const Vector bS = select_entries(beta_star, S.indices());
    const Vector ones = Vector::Ones(S.size());
    const Vector zte = z.ZS.transpose() * noise / n;

    // (1/n Z_S^T Z_S)^{-1} (1/n Z_S^T X_S b*_S + 1/n Z_S^T eps - lambda 1) > 0
    const Vector rhs = z.ZS.transpose() * (XS * bS) / n + zte - lambda * ones;
    const Vector dS = solve_spd(z.GS, rhs);
    cert.underselection_margin = dS.minCoeff();
    cert.no_underselection = cert.underselection_margin > tol;

    // 1/n Z_Sc^T (I - P_S) eps + lambda Z_Sc^T Z_S (Z_S^T Z_S)^{-1} 1 <= lambda 1
    if (z.ZSc.cols() == 0) {
        cert.no_overselection = true;
        cert.overselection_margin = std::numeric_limits<double>::infinity();
    } else {
        const Vector proj = z.ZS * solve_spd(z.GS, zte);
        const Vector lhs = z.ZSc.transpose() * (noise - proj) / n + lambda * (z.GScS * solve_spd(z.GS, ones));
        cert.overselection_margin = (lambda * Vector::Ones(lhs.size()) - lhs).minCoeff();
        cert.no_overselection = cert.overselection_margin >= -tol;
    }

    for (int j : S.indices())
        if ((init.beta(j) > 0.0) != (beta_star(j) > 0.0)) cert.initial_signs_agree = false;
    return cert;
}

SignRecoveryCertificate certify_alasso(const Dataset& d, const InitialEstimate& init, const Vector& beta_star,
                                       double lambda, const Vector& noise, double tol) {
    check_certificate_inputs(d, init, beta_star, lambda, noise);
    const SupportSet S = support_of(beta_star, 0.0);
    const double n = d.n();
    SignRecoveryCertificate cert;
    cert.method = SelectorKind::alasso;

    if (S.empty()) {
        cert.no_underselection = true;
        cert.underselection_margin = std::numeric_limits<double>::infinity();
        const Vector z_lhs = init.beta.cwiseProduct(Vector(d.X.transpose() * noise / n));
        cert.overselection_margin = lambda - inf_norm(z_lhs);
        cert.no_overselection = cert.overselection_margin >= -tol;
        return cert;
    }

    const ZBlocks z = z_blocks(d, init, S);
    const Vector bS = select_entries(beta_star, S.indices());
    const Vector initS = select_entries(init.beta, S.indices());
    if (initS.cwiseAbs().minCoeff() == 0.0) throw SingularMatrix("Z_S^T Z_S is singular: beta_init vanishes on S");
    const Vector dstar = bS.cwiseQuotient(initS);
    const Vector sgn = dstar.cwiseSign();
    const Vector zte = z.ZS.transpose() * noise / n;

    // d_S = d*_S + (1/n Z_S^T Z_S)^{-1} (1/n Z_S^T eps - lambda sign(d*_S)) must keep the signs of d*_S
    const Vector u = solve_spd(z.GS, Vector(zte - lambda * sgn));
    const Vector dS = dstar + u;
    cert.underselection_margin = sgn.cwiseProduct(dS).minCoeff();
    cert.no_underselection = cert.underselection_margin > tol;

    // | Z_Sc^T Z_S (Z_S^T Z_S)^{-1} (1/n Z_S^T eps - lambda sign(d*_S)) - 1/n Z_Sc^T eps | <= lambda 1
    if (z.ZSc.cols() == 0) {
        cert.no_overselection = true;
        cert.overselection_margin = std::numeric_limits<double>::infinity();
    } else {
        const Vector lhs = (z.GScS * u - z.ZSc.transpose() * noise / n).cwiseAbs();
        cert.overselection_margin = (lambda * Vector::Ones(lhs.size()) - lhs).minCoeff();
        cert.no_overselection = cert.overselection_margin >= -tol;
    }
    return cert;
}

double oracle_variance(const Dataset& d, const SupportSet& S, double sigma2, const Vector& v) {
    require_support(d, S);
    if (v.size() != S.size()) throw InputError("v must have length |S|");
    if (v.norm() > 1.0 + 1e-12) throw InputError("v must satisfy ||v||_2 <= 1");
    if (!(sigma2 > 0.0)) throw InputError("sigma2 must be positive");
    const SymmetricMatrix GS = SymmetricMatrix::gram(select_columns(d.X, S.indices()));
    if (v.isZero(0.0)) {
        solve_spd(GS, v);
        return 0.0;
    }
    return sigma2 * v.dot(solve_spd(GS, v));
}

}  // namespace twostep
