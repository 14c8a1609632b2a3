#include "twostep/rng.hpp"

#include <vector>

namespace twostep {

namespace {

std::vector<std::uint32_t> seed_words(std::uint64_t seed, std::initializer_list<std::uint64_t> coordinate) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * (coordinate.size() + 1));
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (auto c : coordinate) push(c);
    return words;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> coordinate) {
    const auto words = seed_words(seed, coordinate);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coordinate) {
    Rng r = make_stream(seed, coordinate);
    return r();
}

Vector standard_normal_vector(int n, Rng& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = z(rng);
    return v;
}

Matrix standard_normal_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = z(rng);
    return m;
}

}  // namespace twostep
