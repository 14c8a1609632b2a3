#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "twostep/numerics.hpp"

namespace twostep {

using Rng = std::mt19937_64;

/// Independent stream for a (seed, i, j, ...) coordinate. The same coordinate
/// always yields the same stream regardless of scheduling.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> coordinate);

/// Mixes a seed with a coordinate into a derived 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coordinate);

Vector standard_normal_vector(int n, Rng& rng);
Matrix standard_normal_matrix(int rows, int cols, Rng& rng);

}  // namespace twostep
