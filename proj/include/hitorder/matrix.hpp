#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hitorder/errors.hpp"
#include "hitorder/rational.hpp"

namespace hitorder {

/// Probability distribution over states {0..k}: entries in [0,1], exact sum 1.
class ProbVector {
  public:
    ProbVector() = default;

    static ProbVector validate(std::vector<Rational> entries) {
        Rational sum(0);
        for (std::size_t j = 0; j < entries.size(); ++j) {
            if (entries[j] < Rational(0) || entries[j] > Rational(1)) throw NegativeEntry(0, j);
            sum += entries[j];
        }
        if (!sum.is_one()) throw RowSumError(0, sum.str());
        return ProbVector(std::move(entries));
    }

    static ProbVector point_mass(std::size_t size, std::size_t at) {
        if (at >= size) throw IndexError("point mass outside the state space");
        std::vector<Rational> v(size, Rational(0));
        v[at] = Rational(1);
        return ProbVector(std::move(v));
    }

    std::size_t size() const { return entries_.size(); }
    const Rational& operator[](std::size_t i) const { return entries_[i]; }
    std::span<const Rational> entries() const { return entries_; }

    friend bool operator==(const ProbVector&, const ProbVector&) = default;

  private:
    explicit ProbVector(std::vector<Rational> v) : entries_(std::move(v)) {}
    std::vector<Rational> entries_;
};

/// Square row-stochastic matrix of exact rationals over states {0..size-1}.
/// Immutable once built; only `validate` and the closed operations below
/// (products, powers, structural rewrites) produce instances.
class StochMatrix {
  public:
    StochMatrix() = default;

    static StochMatrix validate(const std::vector<std::vector<Rational>>& rows) {
        const std::size_t n = rows.size();
        if (n == 0) throw SizeMismatch("matrix must have at least one state");
        std::vector<Rational> flat;
        flat.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw SizeMismatch("matrix is not square at row " + std::to_string(i));
            Rational sum(0);
            for (std::size_t j = 0; j < n; ++j) {
                const Rational& x = rows[i][j];
                if (x.sign() < 0 || x > Rational(1)) throw NegativeEntry(i, j);
                sum += x;
                flat.push_back(x);
            }
            if (!sum.is_one()) throw RowSumError(i, sum.str());
        }
        return StochMatrix(n, std::move(flat));
    }

    static StochMatrix identity(std::size_t n) {
        std::vector<Rational> flat(n * n, Rational(0));
        for (std::size_t i = 0; i < n; ++i) flat[i * n + i] = Rational(1);
        return StochMatrix(n, std::move(flat));
    }

    std::size_t size() const { return n_; }
    /// Index of the last state (k in a chain over {0..k}).
    std::size_t top() const { return n_ - 1; }

    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
    ProbVector row_vector(std::size_t i) const {
        return ProbVector::validate(std::vector<Rational>(row(i).begin(), row(i).end()));
    }

    std::vector<std::vector<Rational>> rows() const {
        std::vector<std::vector<Rational>> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i].assign(row(i).begin(), row(i).end());
        return out;
    }

    friend bool operator==(const StochMatrix&, const StochMatrix&) = default;

    friend StochMatrix operator*(const StochMatrix& a, const StochMatrix& b) {
        if (a.n_ != b.n_) throw SizeMismatch("matrix product of different sizes");
        const std::size_t n = a.n_;
        std::vector<Rational> out(n * n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                const Rational& x = a(i, l);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (!b(l, j).is_zero()) out[i * n + j] += x * b(l, j);
            }
        return StochMatrix(n, std::move(out));
    }

    /// Row-vector times matrix; the result is again a distribution.
    friend ProbVector operator*(const ProbVector& v, const StochMatrix& m) {
        if (v.size() != m.n_) throw SizeMismatch("vector/matrix size mismatch");
        std::vector<Rational> out(m.n_, Rational(0));
        for (std::size_t l = 0; l < m.n_; ++l) {
            if (v[l].is_zero()) continue;
            for (std::size_t j = 0; j < m.n_; ++j)
                if (!m(l, j).is_zero()) out[j] += v[l] * m(l, j);
        }
        return ProbVector::validate(std::move(out));
    }

  private:
    friend StochMatrix make_absorbing(const StochMatrix&, std::size_t);
    friend StochMatrix taboo(const StochMatrix&, std::size_t);
    friend StochMatrix collapse_from(const StochMatrix&, std::size_t);

    StochMatrix(std::size_t n, std::vector<Rational> flat) : n_(n), data_(std::move(flat)) {}

    std::size_t n_ = 0;
    std::vector<Rational> data_;
};

/// p_{i,j} = 0 whenever j > i + 1.
inline bool is_skip_free(const StochMatrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 2; j < m.size(); ++j)
            if (!m(i, j).is_zero()) return false;
    return true;
}

inline bool is_absorbing(const StochMatrix& m, std::size_t state) {
    if (state >= m.size()) throw IndexError("state " + std::to_string(state) + " out of range");
    return m(state, state).is_one();
}

inline StochMatrix make_absorbing(const StochMatrix& m, std::size_t target) {
    if (target >= m.size()) throw IndexError("target " + std::to_string(target) + " out of range");
    StochMatrix out = m;
    for (std::size_t j = 0; j < m.size(); ++j) out.data_[target * m.size() + j] = Rational(j == target ? 1 : 0);
    return out;
}

/// Chain conditioned never to enter `target`; the state is removed and the
/// remaining rows renormalized by 1 - p_{i,target}.
inline StochMatrix taboo(const StochMatrix& m, std::size_t target) {
    const std::size_t n = m.size();
    if (target >= n) throw IndexError("target " + std::to_string(target) + " out of range");
    if (n == 1) throw SizeMismatch("taboo of a one-state chain is empty");
    std::vector<Rational> flat;
    flat.reserve((n - 1) * (n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        if (i == target) continue;
        Rational stay = Rational(1) - m(i, target);
        if (stay.is_zero()) throw TabooDegenerate(i);
        for (std::size_t j = 0; j < n; ++j)
            if (j != target) flat.push_back(m(i, j) / stay);
    }
    return StochMatrix(n - 1, std::move(flat));
}

/// States >= level merged into one absorbing state `level`. Under this
/// matrix, the hitting time of `level` is the first time the original chain
/// reaches a state >= level.
inline StochMatrix collapse_from(const StochMatrix& m, std::size_t level) {
    const std::size_t n = m.size();
    if (level >= n) throw IndexError("level " + std::to_string(level) + " out of range");
    const std::size_t s = level + 1;
    std::vector<Rational> flat(s * s, Rational(0));
    for (std::size_t i = 0; i < level; ++i)
        for (std::size_t j = 0; j < n; ++j) flat[i * s + std::min(j, level)] += m(i, j);
    flat[level * s + level] = Rational(1);
    return StochMatrix(s, std::move(flat));
}

/// Exact M^n by binary exponentiation; M^0 is the identity.
inline StochMatrix mat_pow(const StochMatrix& m, unsigned n) {
    StochMatrix result = StochMatrix::identity(m.size());
    StochMatrix base = m;
    bool first = true;
    while (n) {
        if (n & 1U) {
            result = first ? base : result * base;
            first = false;
        }
        n >>= 1U;
        if (n) base = base * base;
    }
    return result;
}

namespace detail {

using BoolMatrix = std::vector<std::vector<bool>>;

inline BoolMatrix support(const StochMatrix& m) {
    BoolMatrix out(m.size(), std::vector<bool>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = !m(i, j).is_zero();
    return out;
}

inline BoolMatrix bool_mul(const BoolMatrix& a, const BoolMatrix& b) {
    const std::size_t n = a.size();
    BoolMatrix out(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l)
            if (a[i][l])
                for (std::size_t j = 0; j < n; ++j)
                    if (b[l][j]) out[i][j] = true;
    return out;
}

/// States reachable from `from` in zero or more steps.
inline std::vector<bool> reachable(const StochMatrix& m, std::size_t from) {
    std::vector<bool> seen(m.size());
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < m.size(); ++j)
            if (!seen[j] && !m(i, j).is_zero()) {
                seen[j] = true;
                stack.push_back(j);
            }
    }
    return seen;
}

}  // namespace detail

/// Wielandt exponent s^2 - 2s + 2: a primitive s-state matrix has M^w > 0.
inline unsigned wielandt_bound(std::size_t s) {
    return static_cast<unsigned>(s * s - 2 * s + 2);
}

/// Primitivity test: is M^w entrywise positive at the Wielandt exponent?
inline bool is_ergodic(const StochMatrix& m) {
    unsigned n = wielandt_bound(m.size());
    detail::BoolMatrix base = detail::support(m);
    detail::BoolMatrix acc;
    bool have = false;
    while (n) {
        if (n & 1U) {
            acc = have ? detail::bool_mul(acc, base) : base;
            have = true;
        }
        n >>= 1U;
        if (n) base = detail::bool_mul(base, base);
    }
    for (const auto& r : acc)
        for (bool b : r)
            if (!b) return false;
    return true;
}

}  // namespace hitorder
