#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hitorder/errors.hpp"
#include "hitorder/matrix.hpp"
#include "hitorder/rational.hpp"

namespace hitorder {

// ---------------------------------------------------------------------------
// Usual stochastic order on distributions over {0..k}
// ---------------------------------------------------------------------------

/// tails[j] = sum_{l >= j} p_l
inline std::vector<Rational> tail_sums(std::span<const Rational> p) {
    std::vector<Rational> tails(p.size());
    Rational acc(0);
    for (std::size_t j = p.size(); j-- > 0;) {
        acc += p[j];
        tails[j] = acc;
    }
    return tails;
}

/// p is stochastically smaller than q: every tail of p is at most the
/// corresponding tail of q.
inline bool st_leq(std::span<const Rational> p, std::span<const Rational> q) {
    if (p.size() != q.size()) throw LengthMismatch("st_leq on vectors of different length");
    Rational tp(0), tq(0);
    for (std::size_t j = p.size(); j-- > 1;) {
        tp += p[j];
        tq += q[j];
        if (tp > tq) return false;
    }
    return true;
}

inline bool st_leq(const ProbVector& p, const ProbVector& q) { return st_leq(p.entries(), q.entries()); }

// ---------------------------------------------------------------------------
// Matrix relations
// ---------------------------------------------------------------------------

/// Row-wise dominance: p~_{i,.} <=st p_{i,.} for every non-top state i.
inline bool rowwise_dominates(const StochMatrix& fast, const StochMatrix& slow) {
    if (fast.size() != slow.size()) throw SizeMismatch("rowwise_dominates on matrices of different size");
    for (std::size_t i = 0; i + 1 < fast.size(); ++i)
        if (!st_leq(slow.row(i), fast.row(i))) return false;
    return true;
}

/// A' <| A: every row i of A' is st-below every row j >= i of A.
inline bool triangle_leq(const StochMatrix& lower, const StochMatrix& upper) {
    const std::size_t n = lower.size();
    if (n != upper.size()) throw SizeMismatch("triangle_leq on matrices of different size");
    std::vector<std::vector<Rational>> lt(n), ut(n);
    for (std::size_t i = 0; i < n; ++i) {
        lt[i] = tail_sums(lower.row(i));
        ut[i] = tail_sums(upper.row(i));
    }
    // For each level, the running max over rows i <= j of the lower tails
    // must stay below the upper tail of row j.
    for (std::size_t level = 1; level < n; ++level) {
        const Rational* running = nullptr;
        for (std::size_t j = 0; j < n; ++j) {
            if (running == nullptr || lt[j][level] > *running) running = &lt[j][level];
            if (*running > ut[j][level]) return false;
        }
    }
    return true;
}

inline bool is_stoch_monotone(const StochMatrix& m) { return triangle_leq(m, m); }

// ---------------------------------------------------------------------------
// Coprime-power certificates
// ---------------------------------------------------------------------------

/// Smallest r such that every r' >= r is a*n1 + b*n2 with a, b >= 0.
/// For coprime n1, n2 this is (n1 - 1)(n2 - 1), one past the Frobenius number.
inline long frobenius_threshold(long n1, long n2) {
    if (n1 < 1 || n2 < 1) throw NotCoprime("frobenius_threshold needs positive arguments");
    if (std::gcd(n1, n2) != 1) throw NotCoprime(std::to_string(n1) + " and " + std::to_string(n2) + " are not coprime");
    return (n1 - 1) * (n2 - 1);
}

struct CoprimePair {
    unsigned n1 = 0;
    unsigned n2 = 0;
    friend bool operator==(const CoprimePair&, const CoprimePair&) = default;
};

namespace detail {

/// Lazily extended sequence M, M^2, M^3, ...
class PowerSeq {
  public:
    explicit PowerSeq(const StochMatrix& m) : base_(m) {}

    const StochMatrix& operator[](unsigned n) {
        if (n == 0) {
            if (!identity_) identity_ = StochMatrix::identity(base_.size());
            return *identity_;
        }
        while (powers_.size() < n) powers_.push_back(powers_.empty() ? base_ : powers_.back() * base_);
        return powers_[n - 1];
    }

  private:
    StochMatrix base_;
    std::vector<StochMatrix> powers_;
    std::optional<StochMatrix> identity_;
};

}  // namespace detail

/// Lexicographically smallest (by n2, then n1) coprime pair n1 < n2 <= n_max
/// with slow^n <| fast^n at both exponents.
inline std::optional<CoprimePair> find_coprime_pair(const StochMatrix& slow, const StochMatrix& fast, unsigned n_max) {
    if (slow.size() != fast.size()) throw SizeMismatch("find_coprime_pair on matrices of different size");
    detail::PowerSeq sp(slow), fp(fast);
    std::vector<char> holds{0};  // holds[n] for n >= 1
    for (unsigned n = 1; n <= n_max; ++n) {
        holds.push_back(triangle_leq(sp[n], fp[n]) ? 1 : 0);
        if (!holds[n] || n < 2) continue;
        for (unsigned n1 = 1; n1 < n; ++n1)
            if (holds[n1] && std::gcd(n1, n) == 1) return CoprimePair{n1, n};
    }
    return std::nullopt;
}

enum class Verdict { StCertified, AstCertified, Falsified, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::StCertified: return "StCertified";
        case Verdict::AstCertified: return "AstCertified";
        case Verdict::Falsified: return "Falsified";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

/// One comparison p~^{(n)}_{0,k} <= p^{(n)}_{0,k}.
struct PrefixCheck {
    unsigned n = 0;
    Rational fast;  // p^{(n)}_{0,k}
    Rational slow;  // p~^{(n)}_{0,k}
    bool holds() const { return slow <= fast; }
};

/// Verdict on T_fast <=st T_slow (or the asymptotic version) with its evidence.
struct OrderCertificate {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<CoprimePair> pair;
    std::optional<long> n_hat;
    std::vector<PrefixCheck> prefix_checks;
    std::optional<PrefixCheck> falsified_at;
    bool identical = false;  // both matrices are equal, hence equal laws
};

namespace detail {

inline void require_absorbing_top(const StochMatrix& fast, const StochMatrix& slow) {
    if (fast.size() != slow.size()) throw SizeMismatch("matrices of different size");
    if (!is_absorbing(fast, fast.top())) throw NotAbsorbing("fast");
    if (!is_absorbing(slow, slow.top())) throw NotAbsorbing("slow");
}

/// p^{(n)}_{0,top} for n = 0..horizon, by propagating delta_0.
inline std::vector<Rational> absorption_curve(const StochMatrix& m, unsigned horizon) {
    std::vector<Rational> out;
    out.reserve(horizon + 1);
    ProbVector v = ProbVector::point_mass(m.size(), 0);
    out.push_back(v[m.top()]);
    for (unsigned n = 1; n <= horizon; ++n) {
        v = v * m;
        out.push_back(v[m.top()]);
    }
    return out;
}

}  // namespace detail

/// Usual-order certificate for T_fast <=st T_slow, both chains absorbed at
/// the top state and started at 0. A coprime pair plus the finite prefix
/// check n = 1..n_hat-1 proves the order; a power with p~ > p refutes it.
inline OrderCertificate certify_st_order(const StochMatrix& fast, const StochMatrix& slow, unsigned n_max = 64) {
    detail::require_absorbing_top(fast, slow);
    OrderCertificate cert;
    cert.identical = fast == slow;
    cert.pair = find_coprime_pair(slow, fast, n_max);

    if (cert.pair) {
        cert.n_hat = frobenius_threshold(cert.pair->n1, cert.pair->n2);
        unsigned last = cert.n_hat > 0 ? static_cast<unsigned>(*cert.n_hat - 1) : 0;
        auto pf = detail::absorption_curve(fast, last);
        auto ps = detail::absorption_curve(slow, last);
        for (unsigned n = 1; n <= last; ++n) {
            PrefixCheck c{n, pf[n], ps[n]};
            cert.prefix_checks.push_back(c);
            if (!c.holds() && !cert.falsified_at) cert.falsified_at = c;
        }
        cert.verdict = cert.falsified_at ? Verdict::Falsified : Verdict::StCertified;
        return cert;
    }
    if (cert.identical) {
        cert.verdict = Verdict::StCertified;
        return cert;
    }
    auto pf = detail::absorption_curve(fast, n_max);
    auto ps = detail::absorption_curve(slow, n_max);
    for (unsigned n = 1; n <= n_max; ++n)
        if (ps[n] > pf[n]) {
            cert.falsified_at = PrefixCheck{n, pf[n], ps[n]};
            cert.verdict = Verdict::Falsified;
            return cert;
        }
    cert.verdict = Verdict::Inconclusive;
    return cert;
}

// ---------------------------------------------------------------------------
// Block-step hypothesis for skip-free chains
// ---------------------------------------------------------------------------

/// m(i) for i = 0..k-1: the block length used from state i.
struct VedereWitness {
    std::vector<unsigned> m;
    friend bool operator==(const VedereWitness&, const VedereWitness&) = default;
};

/// Checks i + m(i) <= k, m(i) >= 1 and p^{(m(i))}_{i,.} >=st p~^{(m(i))}_{i,.}.
inline bool witness_valid(const StochMatrix& fast, const StochMatrix& slow, const VedereWitness& w) {
    const std::size_t k = fast.top();
    if (w.m.size() != k || slow.size() != fast.size()) return false;
    for (std::size_t i = 0; i < k; ++i) {
        unsigned m = w.m[i];
        if (m < 1 || i + m > k) return false;
        if (!st_leq(mat_pow(slow, m).row(i), mat_pow(fast, m).row(i))) return false;
    }
    return true;
}

/// Smallest m(i) per state such that the block-step hypothesis holds, or
/// nothing if some state admits none within m_max. Optional initial laws
/// must satisfy pi_slow <=st pi_fast.
inline std::optional<VedereWitness> check_vedere(const StochMatrix& fast, const StochMatrix& slow, unsigned m_max,
                                                 const std::optional<ProbVector>& pi_fast = std::nullopt,
                                                 const std::optional<ProbVector>& pi_slow = std::nullopt) {
    if (fast.size() != slow.size()) throw SizeMismatch("check_vedere on matrices of different size");
    if (!is_skip_free(fast)) throw NotSkipFree("fast");
    if (!is_skip_free(slow)) throw NotSkipFree("slow");
    if (pi_fast.has_value() != pi_slow.has_value())
        throw Error("initial laws must be given for both chains or for neither");
    if (pi_fast && !st_leq(*pi_slow, *pi_fast)) return std::nullopt;

    const std::size_t k = fast.top();
    detail::PowerSeq fp(fast), sp(slow);
    VedereWitness w;
    for (std::size_t i = 0; i < k; ++i) {
        unsigned limit = std::min<unsigned>(m_max, static_cast<unsigned>(k - i));
        std::optional<unsigned> found;
        for (unsigned m = 1; m <= limit && !found; ++m)
            if (st_leq(sp[m].row(i), fp[m].row(i))) found = m;
        if (!found) return std::nullopt;
        w.m.push_back(*found);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Level-m restart hypothesis
// ---------------------------------------------------------------------------

/// How the comparison of the level-m hitting times was settled.
enum class LevelRoute { Identical, RowWise, BlockStep, PowerOrder, External, Falsified, Inconclusive };

inline const char* to_string(LevelRoute r) {
    switch (r) {
        case LevelRoute::Identical: return "identical";
        case LevelRoute::RowWise: return "rowwise";
        case LevelRoute::BlockStep: return "block-step";
        case LevelRoute::PowerOrder: return "power-order";
        case LevelRoute::External: return "external";
        case LevelRoute::Falsified: return "falsified";
        case LevelRoute::Inconclusive: return "inconclusive";
    }
    return "?";
}

inline bool route_certifies(LevelRoute r) {
    return r != LevelRoute::Falsified && r != LevelRoute::Inconclusive;
}

struct ServeCheck {
    unsigned m = 0;
    bool upper_rows_ok = false;  // literal two-entry row condition on [m, k-1]
    LevelRoute level_route = LevelRoute::Inconclusive;
    bool holds() const { return upper_rows_ok && route_certifies(level_route); }
    bool inconclusive() const { return upper_rows_ok && level_route == LevelRoute::Inconclusive; }
};

/// Rows i in [m, k-1]: p~_{i,i+1} <= p_{i,i+1} and p~_{i,0} + p~_{i,i+1} = 1.
inline bool serve_upper_rows(const StochMatrix& fast, const StochMatrix& slow, unsigned m) {
    for (std::size_t i = m; i < fast.top(); ++i) {
        if (slow(i, i + 1) > fast(i, i + 1)) return false;
        if (!(slow(i, 0) + slow(i, i + 1)).is_one()) return false;
    }
    return true;
}

/// Decides T_m <=st T~_m from the matrices alone: both chains with every
/// state >= m merged into one absorbing state, then tried against the
/// row-wise, block-step and coprime-power criteria in turn.
inline LevelRoute compare_level(const StochMatrix& fast, const StochMatrix& slow, unsigned m, unsigned n_max) {
    StochMatrix cf = collapse_from(fast, m);
    StochMatrix cs = collapse_from(slow, m);
    if (cf == cs) return LevelRoute::Identical;
    if (rowwise_dominates(cf, cs)) return LevelRoute::RowWise;
    if (check_vedere(cf, cs, m)) return LevelRoute::BlockStep;
    OrderCertificate cert = certify_st_order(cf, cs, n_max);
    if (cert.verdict == Verdict::StCertified) return LevelRoute::PowerOrder;
    if (cert.verdict == Verdict::Falsified) return LevelRoute::Falsified;
    return LevelRoute::Inconclusive;
}

namespace detail {

inline void require_serve_inputs(const StochMatrix& fast, const StochMatrix& slow, unsigned m) {
    if (fast.size() != slow.size()) throw SizeMismatch("check_serve on matrices of different size");
    if (!is_skip_free(fast)) throw NotSkipFree("fast");
    if (!is_skip_free(slow)) throw NotSkipFree("slow");
    if (m < 1 || m + 1 > fast.top()) throw IndexError("restart level m must lie in [1, k-1]");
}

}  // namespace detail

/// Restart-level criterion: the row condition on [m, k-1] plus T_m <=st T~_m
/// (decided by `compare_level`). When `level_known` is set it replaces the
/// matrix-level decision of T_m <=st T~_m (for instance a word-level argument).
inline ServeCheck check_serve(const StochMatrix& fast, const StochMatrix& slow, unsigned m, unsigned n_max = 64,
                              std::optional<LevelRoute> level_known = std::nullopt) {
    detail::require_serve_inputs(fast, slow, m);
    ServeCheck out;
    out.m = m;
    out.upper_rows_ok = serve_upper_rows(fast, slow, m);
    if (!out.upper_rows_ok) return out;
    out.level_route = level_known ? *level_known : compare_level(fast, slow, m, n_max);
    return out;
}

}  // namespace hitorder
