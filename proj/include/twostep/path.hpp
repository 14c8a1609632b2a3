#pragma once

#include <string>
#include <vector>

#include "twostep/data_model.hpp"

namespace twostep {

/// Solutions along a strictly descending lambda grid.
struct PathSolution {
    std::string method;
    Vector lambdas;
    std::vector<Vector> coefficients;
    std::vector<SupportSet> supports;
    std::vector<SignVector> signs;
    std::vector<double> kkt_residuals;  // empty for methods without a KKT system
    int total_sweeps = 0;

    int size() const noexcept { return static_cast<int>(lambdas.size()); }
    void push(double lambda, Vector beta, double kkt_residual = 0.0, double eps = kSupportEps);
};

/// Throws InputError unless the grid is nonempty, positive and strictly descending.
void check_descending_grid(const Vector& grid);

}  // namespace twostep
