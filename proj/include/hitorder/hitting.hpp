#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hitorder/errors.hpp"
#include "hitorder/matrix.hpp"
#include "hitorder/order.hpp"
#include "hitorder/rational.hpp"

namespace hitorder {

/// Law of the hitting time T of `target` from state 0: cdf[n] = P(T <= n).
struct HittingDistribution {
    std::size_t target = 0;
    std::vector<Rational> cdf;

    std::size_t horizon() const { return cdf.empty() ? 0 : cdf.size() - 1; }
    /// P(T = n) for 1 <= n <= horizon; P(T = 0) = cdf[0].
    Rational pmf(std::size_t n) const { return n == 0 ? cdf[0] : cdf[n] - cdf[n - 1]; }
};

/// Because `target` is absorbing, {T <= n} = {X_n = target}, so the cdf is
/// the target column of the n-step law started at 0.
inline HittingDistribution hitting_cdf(const StochMatrix& m, std::size_t target, unsigned horizon) {
    if (!is_absorbing(m, target)) throw NotAbsorbing("input");
    HittingDistribution out;
    out.target = target;
    out.cdf.reserve(horizon + 1);
    ProbVector v = ProbVector::point_mass(m.size(), 0);
    out.cdf.push_back(v[target]);
    for (unsigned n = 1; n <= horizon; ++n) {
        v = v * m;
        out.cdf.push_back(v[target]);
    }
    return out;
}

namespace detail {

/// Solves A x = b exactly by Gauss-Jordan elimination with pivot search.
/// Returns nothing when A is singular.
inline std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        const Rational inv = Rational(1) / a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const Rational f = a[r][col];
            for (std::size_t j = col; j < n; ++j)
                if (!a[col][j].is_zero()) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    return b;
}

}  // namespace detail

/// E[T] for the hitting time of `target` from 0: first entry of (I - Q)^{-1} 1
/// over the transient states reachable from 0.
inline Rational expected_hitting(const StochMatrix& m, std::size_t target) {
    if (!is_absorbing(m, target)) throw NotAbsorbing("input");
    if (target == 0) return Rational(0);

    // Every state reachable from 0 must still be able to reach the target.
    std::vector<bool> from_start = detail::reachable(m, 0);
    std::vector<std::size_t> transient;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!from_start[i] || i == target) continue;
        if (!detail::reachable(m, i)[target])
            throw Divergent("state " + std::to_string(i) + " is reachable from 0 but cannot reach the target");
        transient.push_back(i);
    }

    const std::size_t t = transient.size();
    std::vector<std::vector<Rational>> a(t, std::vector<Rational>(t, Rational(0)));
    for (std::size_t r = 0; r < t; ++r)
        for (std::size_t c = 0; c < t; ++c)
            a[r][c] = Rational(r == c ? 1 : 0) - m(transient[r], transient[c]);
    auto x = detail::solve_exact(std::move(a), std::vector<Rational>(t, Rational(1)));
    if (!x) throw Divergent("singular fundamental system");
    return (*x)[0];  // transient[0] == 0
}

/// Smallest n <= horizon with p~^{(n)}_{0,k} > p^{(n)}_{0,k}: a concrete
/// refutation of T_fast <=st T_slow.
inline std::optional<unsigned> falsify_order(const StochMatrix& fast, const StochMatrix& slow, unsigned horizon = 200) {
    detail::require_absorbing_top(fast, slow);
    auto pf = detail::absorption_curve(fast, horizon);
    auto ps = detail::absorption_curve(slow, horizon);
    for (unsigned n = 1; n <= horizon; ++n)
        if (ps[n] > pf[n]) return n;
    return std::nullopt;
}

/// Tail-order certificate: a coprime pair makes slow^n <| fast^n hold for
/// every n >= n_hat, hence T_fast is eventually st-below T_slow.
inline OrderCertificate certify_ast_order(const StochMatrix& fast, const StochMatrix& slow, unsigned n_max = 64) {
    detail::require_absorbing_top(fast, slow);
    OrderCertificate cert;
    cert.identical = fast == slow;
    cert.pair = find_coprime_pair(slow, fast, n_max);
    if (cert.pair) cert.n_hat = frobenius_threshold(cert.pair->n1, cert.pair->n2);
    cert.verdict = (cert.pair || cert.identical) ? Verdict::AstCertified : Verdict::Inconclusive;
    return cert;
}

}  // namespace hitorder
