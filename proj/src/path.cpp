#include "twostep/path.hpp"

#include <cmath>

#include "twostep/errors.hpp"

namespace twostep {

void PathSolution::push(double lambda, Vector beta, double kkt_residual, double eps) {
    const int k = size();
    lambdas.conservativeResize(k + 1);
    lambdas(k) = lambda;
    supports.push_back(support_of(beta, eps));
    signs.push_back(sign_pattern(beta, eps));
    kkt_residuals.push_back(kkt_residual);
    coefficients.push_back(std::move(beta));
}

void check_descending_grid(const Vector& grid) {
    if (grid.size() == 0) throw InputError("lambda grid is empty");
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        if (!(grid(i) > 0.0) || !std::isfinite(grid(i))) throw InputError("lambda grid must be positive and finite");
        if (i > 0 && !(grid(i) < grid(i - 1))) throw InputError("lambda grid must be strictly descending");
    }
}

}  // namespace twostep
