#pragma once

#include <optional>
#include <string>

#include "twostep/data_model.hpp"
#include "twostep/initial_estimators.hpp"

namespace twostep {

/// 1 - || X_Sc^T X_S (X_S^T X_S)^{-1} signs_S ||_inf. Returns 1 when S covers
/// every column. Throws SingularMatrix when X_S^T X_S is not invertible.
double eta_infinity(const Dataset& d, const SupportSet& S, const SignVector& signs_on_S);

struct DesignConstants {
    double c_max = 0.0;       // || X_Sc^T X_S (X_S^T X_S)^{-1} ||_inf
    double lambda_min = 0.0;  // smallest eigenvalue of (1/n) X_S^T X_S
};

DesignConstants design_constants(const Dataset& d, const SupportSet& S);

struct DesignDiagnostics {
    double eta_inf = 0.0;
    double c_max = 0.0;
    double lambda_min = 0.0;
    double rho_n = 0.0;
    // max_i ||x_i(S)||_2 / sqrt(n); reported, never thresholded.
    double max_row_norm = 0.0;
};

DesignDiagnostics design_diagnostics(const Dataset& d, const Vector& beta_star);

struct Assumption2Report {
    int q = 0;
    Vector singular_values;  // d_1 >= ... >= d_q of (1/n) X^T X
    std::optional<double> xi_hat;  // needs beta*
    Vector theta;                  // e_j^T beta*, empty without beta*
};

Assumption2Report assumption2_report(const Dataset& d, const std::optional<Vector>& beta_star,
                                     double rank_tol = kDefaultRankTol);

enum class SelectorKind { garrote, alasso };

struct SignRecoveryCertificate {
    SelectorKind method = SelectorKind::garrote;
    bool no_underselection = false;
    double underselection_margin = 0.0;  // min over S of the strict inequality slack
    bool no_overselection = false;
    double overselection_margin = 0.0;   // min over Sc of (rhs - lhs); +inf when Sc is empty
    // Garrote leaves the sign of beta_init untouched, so sign recovery
    // additionally needs sign(beta_init_S) == sign(beta*_S). Always true for alasso.
    bool initial_signs_agree = true;

    bool holds() const noexcept { return no_underselection && no_overselection; }
    bool recovers_signs() const noexcept { return holds() && initial_signs_agree; }
};

/// Roundoff allowance: the strict inequality must clear +tol, the non-strict
/// one may miss by at most tol.
inline constexpr double kCertificateTol = 1e-10;

/// Evaluates the garrote recovery inequalities for the realized noise.
SignRecoveryCertificate certify_garrote(const Dataset& d, const InitialEstimate& init, const Vector& beta_star,
                                        double lambda, const Vector& noise, double tol = kCertificateTol);

SignRecoveryCertificate certify_alasso(const Dataset& d, const InitialEstimate& init, const Vector& beta_star,
                                       double lambda, const Vector& noise, double tol = kCertificateTol);

/// w_n^2 = sigma2 v^T ((1/n) X_S^T X_S)^{-1} v with ||v||_2 <= 1.
double oracle_variance(const Dataset& d, const SupportSet& S, double sigma2, const Vector& v);

}  // namespace twostep
