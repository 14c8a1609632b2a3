#include "twostep/data_model.hpp"

#include <algorithm>
#include <cmath>

#include "twostep/errors.hpp"

namespace twostep {

void Dataset::validate() const {
    if (X.rows() < 1 || X.cols() < 1) throw InputError("design must have n >= 1 and p >= 1");
    if (y.size() != X.rows())
        throw InputError("response length " + std::to_string(y.size()) + " does not match " +
                         std::to_string(X.rows()) + " design rows");
    if (!X.allFinite()) throw InputError("design contains NaN or Inf");
    if (!y.allFinite()) throw InputError("response contains NaN or Inf");
}

Dataset make_dataset(Matrix X, Vector y) {
    Dataset d{std::move(X), std::move(y), std::nullopt};
    d.validate();
    return d;
}

Dataset standardize(const Dataset& d) {
    d.validate();
    const int n = d.n(), p = d.p();
    Dataset out{d.X, d.y, std::nullopt};
    Standardization step;
    step.center = d.X.colwise().mean().transpose();
    step.scale.resize(p);
    for (int j = 0; j < p; ++j) {
        out.X.col(j).array() -= step.center(j);
        const double ms = out.X.col(j).squaredNorm() / n;
        const double magnitude = std::max(1.0, d.X.col(j).cwiseAbs().maxCoeff());
        if (!(std::sqrt(ms) > 1e-12 * magnitude)) throw ConstantColumn(j);
        step.scale(j) = std::sqrt(ms);
        out.X.col(j) /= step.scale(j);
    }
    step.y_center = d.y.mean();
    out.y.array() -= step.y_center;

    if (d.standardization) {
        // x_std2 = ((x - c1)/s1 - c2)/s2 = (x - (c1 + s1 c2)) / (s1 s2)
        const Standardization& prior = *d.standardization;
        Standardization composed;
        composed.center = prior.center.array() + prior.scale.array() * step.center.array();
        composed.scale = prior.scale.array() * step.scale.array();
        composed.y_center = prior.y_center + step.y_center;
        out.standardization = std::move(composed);
    } else {
        out.standardization = std::move(step);
    }
    return out;
}

LinearFit to_original_scale(const Vector& beta_std, const Standardization& record) {
    LinearFit fit;
    fit.beta = beta_std.array() / record.scale.array();
    fit.intercept = record.y_center - record.center.dot(fit.beta);
    return fit;
}

Vector to_standardized_scale(const Vector& beta_orig, const Standardization& record) {
    return beta_orig.array() * record.scale.array();
}

SupportSet::SupportSet(std::vector<int> indices, int p) : indices_(std::move(indices)), p_(p) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    if (!indices_.empty() && (indices_.front() < 0 || indices_.back() >= p))
        throw InputError("support index out of range [0, " + std::to_string(p) + ")");
}

SupportSet SupportSet::all(int p) {
    std::vector<int> idx(p);
    for (int j = 0; j < p; ++j) idx[j] = j;
    return SupportSet(std::move(idx), p);
}

bool SupportSet::contains(int j) const {
    return std::binary_search(indices_.begin(), indices_.end(), j);
}

SupportSet SupportSet::complement() const {
    std::vector<int> rest;
    for (int j = 0; j < p_; ++j)
        if (!contains(j)) rest.push_back(j);
    return SupportSet(std::move(rest), p_);
}

SignVector::SignVector(std::vector<std::int8_t> entries) : entries_(std::move(entries)) {
    for (auto e : entries_)
        if (e < -1 || e > 1) throw InputError("sign entries must lie in {-1, 0, +1}");
}

SignVector SignVector::restricted(const SupportSet& S) const {
    std::vector<std::int8_t> sub;
    sub.reserve(S.size());
    for (int j : S.indices()) sub.push_back(entries_.at(j));
    return SignVector(std::move(sub));
}

Vector SignVector::as_vector() const {
    Vector v(size());
    for (int j = 0; j < size(); ++j) v(j) = entries_[j];
    return v;
}

SupportSet support_of(const Vector& beta, double eps) {
    std::vector<int> idx;
    for (int j = 0; j < beta.size(); ++j)
        if (std::abs(beta(j)) > eps) idx.push_back(j);
    return SupportSet(std::move(idx), static_cast<int>(beta.size()));
}

SignVector sign_pattern(const Vector& beta, double eps) {
    std::vector<std::int8_t> s(beta.size(), 0);
    for (int j = 0; j < beta.size(); ++j) {
        if (beta(j) > eps) s[j] = 1;
        else if (beta(j) < -eps) s[j] = -1;
    }
    return SignVector(std::move(s));
}

TrueModel TrueModel::from_beta(Vector beta_star, double sigma2) {
    if (!(sigma2 > 0.0)) throw InputError("sigma2 must be positive");
    TrueModel m;
    m.support = support_of(beta_star, 0.0);
    m.s = m.support.size();
    m.sigma2 = sigma2;
    m.rho = 0.0;
    if (m.s > 0) {
        m.rho = std::abs(beta_star(m.support.indices().front()));
        for (int j : m.support.indices()) m.rho = std::min(m.rho, std::abs(beta_star(j)));
    }
    m.beta_star = std::move(beta_star);
    return m;
}

Matrix select_columns(const Matrix& X, const std::vector<int>& cols) {
    Matrix out(X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = X.col(cols[k]);
    return out;
}

Vector select_entries(const Vector& v, const std::vector<int>& idx) {
    Vector out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(idx[k]);
    return out;
}

}  // namespace twostep
