#pragma once

#include <stdexcept>
#include <string>

namespace twostep {

// Base of every error raised by the library. Numerical failures and input
// failures are split so the CLI can map them to distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public NumericalError {
public:
    explicit SingularMatrix(const std::string& what = "matrix is singular to working precision")
        : NumericalError(what) {}
};

class NonConvergence : public NumericalError {
public:
    explicit NonConvergence(const std::string& what = "eigendecomposition did not converge")
        : NumericalError(what) {}
};

class MaxIterations : public NumericalError {
public:
    MaxIterations(double lambda, int sweeps)
        : NumericalError("coordinate descent hit the sweep cap (" + std::to_string(sweeps) +
                         " sweeps) at lambda=" + std::to_string(lambda)),
          lambda_(lambda) {}
    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

class ConstantColumn : public InputError {
public:
    explicit ConstantColumn(int column)
        : InputError("column " + std::to_string(column) + " has zero variance"), column_(column) {}
    int column() const noexcept { return column_; }

private:
    int column_;
};

class DegenerateGCV : public NumericalError {
public:
    DegenerateGCV() : NumericalError("GCV undefined: trace(H)/n >= 1 at every grid point") {}
};

class AllWeightsInfinite : public InputError {
public:
    AllWeightsInfinite() : InputError("initial estimate is identically zero; every weight is infinite") {}
};

class SpecMismatch : public InputError {
public:
    using InputError::InputError;
};

}  // namespace twostep
