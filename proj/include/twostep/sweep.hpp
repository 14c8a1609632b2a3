#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twostep/io.hpp"
#include "twostep/pipeline.hpp"

namespace twostep {

struct SweepOptions {
    std::vector<std::string> methods{"Lasso", "HT-Univ", "HT-Ridge", "HT-Lasso", "ALasso-Univ", "ALasso-Ridge",
                                     "ALasso-Lasso"};
    int splits = 1000;
    int n_train = 100;
    int max_size = 10;  // sparsity levels 1..max_size
    std::uint64_t seed = 1;
    int grid_size = kDefaultLambdaGridSize;
};

struct SweepResult {
    std::vector<std::string> methods;
    std::vector<int> sizes;
    Matrix mean_mse;  // sizes x methods
    // per split, per method, per size; NaN when the method failed on that split
    std::vector<std::vector<std::vector<double>>> mse;
    std::vector<int> failures;  // per method
};

/// Path index whose support size is nearest k; ties go to the smaller lambda
/// (the later index on a descending grid).
int nearest_support_index(const PathSolution& path, int k);

SweepResult sparsity_sweep(const Dataset& d, const SweepOptions& options, int workers = 1);

/// Columns: sparsity, then the mean test MSE per method.
TextTable sweep_table(const SweepResult& r);

}  // namespace twostep
