#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twostep/numerics.hpp"

namespace twostep {

/// Default threshold for reading supports and signs off solver output, in
/// standardized coordinates.
inline constexpr double kSupportEps = 1e-10;

// Affine map applied to the columns: x_std = (x - center) / scale. The
// response is centered only.
struct Standardization {
    Vector center;
    Vector scale;
    double y_center = 0.0;
};

struct Dataset {
    Matrix X;
    Vector y;
    std::optional<Standardization> standardization;

    int n() const noexcept { return static_cast<int>(X.rows()); }
    int p() const noexcept { return static_cast<int>(X.cols()); }

    /// Throws InputError on empty shapes, length mismatch or non-finite values.
    void validate() const;
};

Dataset make_dataset(Matrix X, Vector y);

/// Mean-center and scale every column to (1/n)||x_j||^2 = 1; center y.
/// Applying it to standardized data is the identity (records compose).
Dataset standardize(const Dataset& d);

// Coefficients on the standardized scale mapped back to the scale the
// standardization was applied to, with the intercept that reproduces the
// standardized-coordinate fitted values.
struct LinearFit {
    Vector beta;
    double intercept = 0.0;
};

LinearFit to_original_scale(const Vector& beta_std, const Standardization& record);
Vector to_standardized_scale(const Vector& beta_orig, const Standardization& record);

class SupportSet {
public:
    SupportSet() = default;
    SupportSet(std::vector<int> indices, int p);

    static SupportSet all(int p);

    const std::vector<int>& indices() const noexcept { return indices_; }
    int size() const noexcept { return static_cast<int>(indices_.size()); }
    int dimension() const noexcept { return p_; }
    bool empty() const noexcept { return indices_.empty(); }
    bool contains(int j) const;
    SupportSet complement() const;

    bool operator==(const SupportSet& other) const = default;

private:
    std::vector<int> indices_;
    int p_ = 0;
};

class SignVector {
public:
    SignVector() = default;
    explicit SignVector(std::vector<std::int8_t> entries);

    const std::vector<std::int8_t>& entries() const noexcept { return entries_; }
    int size() const noexcept { return static_cast<int>(entries_.size()); }
    int operator[](int j) const { return entries_.at(j); }
    SignVector restricted(const SupportSet& S) const;
    Vector as_vector() const;

    bool operator==(const SignVector& other) const = default;

private:
    std::vector<std::int8_t> entries_;
};

SupportSet support_of(const Vector& beta, double eps = kSupportEps);
SignVector sign_pattern(const Vector& beta, double eps = kSupportEps);

struct TrueModel {
    Vector beta_star;
    SupportSet support;
    int s = 0;
    double sigma2 = 1.0;
    double rho = 0.0;  // min_{j in S} |beta*_j|; 0 when S is empty

    static TrueModel from_beta(Vector beta_star, double sigma2);
};

Matrix select_columns(const Matrix& X, const std::vector<int>& cols);
Vector select_entries(const Vector& v, const std::vector<int>& idx);

}  // namespace twostep
