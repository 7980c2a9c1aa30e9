#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hitorder/hitorder.hpp"

namespace fixtures {

using hitorder::Rational;
using hitorder::StochMatrix;

inline StochMatrix mat(const std::vector<std::vector<Rational>>& rows) { return StochMatrix::validate(rows); }

/// Four-state skip-free pair; `fast` hits 3 sooner, `slow` hits 1 sooner.
inline StochMatrix block_fast(const Rational& e) {
    const Rational h(1, 2);
    return mat({{h + e, h - e, 0, 0}, {0, h, h, 0}, {h, 0, 0, h}, {0, 0, 0, 1}});
}

inline StochMatrix block_slow(const Rational& e) {
    const Rational h(1, 2);
    return mat({{h, h, 0, 0}, {Rational(1) - e, 0, e, 0}, {h, 0, 0, h}, {0, 0, 0, 1}});
}

/// Upper bidiagonal 3-state chain with holding probabilities a, b.
inline StochMatrix bidiagonal(const Rational& a, const Rational& b) {
    return mat({{a, Rational(1) - a, 0}, {0, b, Rational(1) - b}, {0, 0, 1}});
}

/// All words of length k over an N-letter alphabet, in lexicographic order.
inline std::vector<hitorder::Word> all_words(std::size_t k, int n) {
    std::vector<hitorder::Word> out;
    std::vector<int> letters(k, 1);
    while (true) {
        out.emplace_back(letters, n);
        std::size_t i = k;
        while (i > 0 && letters[i - 1] == n) letters[--i] = 1;
        if (i == 0) break;
        ++letters[i - 1];
    }
    return out;
}

/// P(T = n) for n = 0..horizon by counting all N^horizon sequences and
/// recording where the word first ends. Independent of the automaton.
inline std::vector<Rational> brute_force_pmf(const hitorder::Word& w, unsigned horizon) {
    const int n_letters = w.alphabet_size();
    const std::size_t k = w.length();
    std::vector<std::uint64_t> counts(horizon + 1, 0);
    std::vector<int> seq(horizon, 1);
    std::uint64_t total = 0;
    while (true) {
        ++total;
        for (std::size_t end = k; end <= horizon; ++end) {
            bool match = true;
            for (std::size_t j = 0; j < k && match; ++j) match = seq[end - k + j] == w[j];
            if (match) {
                ++counts[end];
                break;
            }
        }
        std::size_t i = horizon;
        while (i > 0 && seq[i - 1] == n_letters) seq[--i] = 1;
        if (i == 0) break;
        ++seq[i - 1];
    }
    std::vector<Rational> out;
    for (auto c : counts) out.push_back(Rational(mpq_class(mpz_class(std::to_string(c)), mpz_class(std::to_string(total)))));
    return out;
}

/// Random stochastic matrix whose rows have denominators in [1, max_den].
inline StochMatrix random_matrix(std::mt19937_64& rng, std::size_t size, int max_den = 6) {
    std::uniform_int_distribution<int> den_dist(1, max_den);
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < size; ++i) {
        const int d = den_dist(rng);
        std::vector<int> cuts(size, 0);
        std::uniform_int_distribution<std::size_t> pick(0, size - 1);
        for (int u = 0; u < d; ++u) ++cuts[pick(rng)];
        auto& row = rows.emplace_back();
        for (int c : cuts) row.push_back(Rational(c, d));
    }
    return StochMatrix::validate(rows);
}

}  // namespace fixtures
