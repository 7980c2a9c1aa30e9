// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"

using namespace hitorder;
using fixtures::all_words;

namespace {

struct Outcome {
    bool ok = true;
    std::vector<std::string> notes;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
};

Word w(const char* s, int n) { return Word::parse(s, n); }

// 1. Conway means against the fundamental-matrix solve.
void conway_means(Outcome& o) {
    for (auto [s, mean] : {std::pair{"ABBBA", 34}, std::pair{"AAAAB", 32}}) {
        Word x = w(s, 2);
        o.require(conway_mean(x) == Rational(mean), std::string("conway_mean(") + s + ") != " + std::to_string(mean));
        o.require(expected_hitting(word_chain(x), 5) == Rational(mean), std::string("expected_hitting(") + s + ") mismatch");
    }
}

// 2. Coprime-power certificate for ABAAB below ABABA.
void coprime_certificate(Outcome& o) {
    const std::pair<int, CoprimePair> expected[] = {{2, CoprimePair{3, 4}}, {3, CoprimePair{4, 5}}};
    for (auto [n, pair] : expected) {
        StochMatrix fast = word_chain(w("ABAAB", n)), slow = word_chain(w("ABABA", n));
        OrderCertificate c = certify_st_order(fast, slow);
        const std::string tag = "N=" + std::to_string(n) + ": ";
        o.require(c.verdict == Verdict::StCertified, tag + "verdict " + to_string(c.verdict));
        if (!c.pair) {
            o.require(false, tag + "no coprime pair");
            continue;
        }
        std::ostringstream got;
        got << "(" << c.pair->n1 << "," << c.pair->n2 << ") n_hat=" << *c.n_hat;
        o.require(*c.pair == pair, tag + "pair " + got.str() + ", expected (" + std::to_string(pair.n1) + "," +
                                       std::to_string(pair.n2) + ")");
        if (n == 2) {
            o.require(*c.n_hat == 6, tag + "n_hat " + std::to_string(*c.n_hat) + ", expected 6");
            // Prefix checks at n = 1..5 recomputed directly from the cdfs.
            auto hf = hitting_cdf(fast, 5, 5), hs = hitting_cdf(slow, 5, 5);
            bool prefix_ok = true;
            for (unsigned k = 1; k <= 5; ++k) prefix_ok = prefix_ok && hs.cdf[k] <= hf.cdf[k];
            o.require(prefix_ok, tag + "cdf prefix n=1..5 violated");
            o.require(c.prefix_checks.size() == 5, tag + "certificate carries " + std::to_string(c.prefix_checks.size()) +
                                                       " prefix checks, expected 5");
        }
    }
}

// 3. Four-state block pair at eps = 1/10.
void block_pair(Outcome& o) {
    const Rational e(1, 10), h(1, 2);
    StochMatrix p = fixtures::block_fast(e), q = fixtures::block_slow(e);
    StochMatrix p2 = mat_pow(p, 2), q2 = mat_pow(q, 2);
    const std::vector<Rational> p_row{(h + e) * (h + e), h - e * e - e / Rational(2), Rational(1, 4) - e / Rational(2), 0};
    const std::vector<Rational> q_row{(Rational(3) - Rational(2) * e) / Rational(4), Rational(1, 4), e / Rational(2), 0};
    o.require(std::equal(p_row.begin(), p_row.end(), p2.row(0).begin()), "P^2 row 0 differs from closed form");
    o.require(std::equal(q_row.begin(), q_row.end(), q2.row(0).begin()), "P~^2 row 0 differs from closed form");
    o.require(!rowwise_dominates(p, q), "row-wise dominance unexpectedly holds");
    auto wit = check_vedere(p, q, 3);
    o.require(wit && wit->m == std::vector<unsigned>{2, 1, 1}, "block witness is not (2,1,1)");
    // Level-1 hitting times: the slow chain reaches 1 first.
    auto c1 = hitting_cdf(make_absorbing(p, 1), 1, 60), c1s = hitting_cdf(make_absorbing(q, 1), 1, 60);
    bool level1 = true;
    for (unsigned n = 0; n <= 60; ++n) level1 = level1 && c1s.cdf[n] >= c1.cdf[n];
    o.require(level1, "T~_1 <=st T_1 fails at some n <= 60");
    auto c3 = hitting_cdf(p, 3, 60), c3s = hitting_cdf(q, 3, 60);
    bool level3 = true;
    for (unsigned n = 0; n <= 60; ++n) level3 = level3 && c3s.cdf[n] <= c3.cdf[n];
    o.require(level3, "T_3 <=st T~_3 fails at some n <= 60");
}

// 4. Same-law pair and the nested bidiagonal pair.
void bidiagonal_pairs(Outcome& o) {
    StochMatrix pt = fixtures::bidiagonal(Rational(1, 3), Rational(1, 2));
    StochMatrix p = fixtures::bidiagonal(Rational(1, 2), Rational(1, 3));
    auto a = hitting_cdf(pt, 2, 50), b = hitting_cdf(p, 2, 50);
    o.require(a.cdf == b.cdf, "same-law pair: cdfs differ");
    bool incomparable = true;
    for (unsigned n = 1; n <= 30; ++n) {
        StochMatrix pn = mat_pow(p, n), ptn = mat_pow(pt, n);
        incomparable = incomparable && !triangle_leq(pn, ptn) && !triangle_leq(ptn, pn);
    }
    o.require(incomparable, "same-law pair: powers comparable at some n <= 30");

    StochMatrix lo = fixtures::bidiagonal(Rational(1, 2), Rational(1, 3));
    StochMatrix hi = fixtures::bidiagonal(Rational(1, 2), Rational(1, 4));
    o.require(triangle_leq(lo, hi), "nested pair: base relation fails");
    bool powers = true;
    for (unsigned n = 1; n <= 30; ++n) powers = powers && triangle_leq(mat_pow(lo, n), mat_pow(hi, n));
    o.require(powers, "nested pair: some power n <= 30 not ordered");
    const double mu_lo = spectral_summary(lo, 2).mu, mu_hi = spectral_summary(hi, 2).mu;
    o.require(std::abs(mu_lo - 0.5) < 1e-9 && std::abs(mu_hi - 0.5) < 1e-9, "nested pair: mu != 1/2");
    o.require(vicev_predict(lo, hi, 2) == VicevPrediction::NotPredicted, "nested pair: spectral test predicts");
}

// 5. Chain hitting laws against enumeration of all letter sequences.
void enumeration(Outcome& o) {
    int words = 0;
    for (int n : {2, 3})
        for (std::size_t k = 1; k <= 4; ++k)
            for (const auto& x : all_words(k, n)) {
                ++words;
                auto chain = hitting_cdf(word_chain(x), k, 12);
                auto brute = fixtures::brute_force_pmf(x, 12);
                for (std::size_t t = 0; t <= 12; ++t)
                    if (chain.pmf(t) != brute[t]) {
                        o.require(false, x.str() + " N=" + std::to_string(n) + " differs at n=" + std::to_string(t));
                        break;
                    }
            }
    o.require(words == 2 + 4 + 8 + 16 + 3 + 9 + 27 + 81, "corpus size");
}

// 6. Extremal words of length 3.
void extremal(Outcome& o) {
    auto slowest = hitting_cdf(word_chain(w("AAA", 2)), 3, 60);
    for (const auto& x : all_words(3, 2)) {
        auto c = hitting_cdf(word_chain(x), 3, 60);
        for (unsigned n = 0; n <= 60; ++n)
            if (c.cdf[n] < slowest.cdf[n]) {
                o.require(false, x.str() + " below AAA at n=" + std::to_string(n));
                break;
            }
    }
    auto fastest = hitting_cdf(word_chain(w("ABC", 3)), 3, 60);
    for (const auto& x : all_words(3, 3)) {
        auto c = hitting_cdf(word_chain(x), 3, 60);
        for (unsigned n = 0; n <= 60; ++n)
            if (c.cdf[n] > fastest.cdf[n]) {
                o.require(false, x.str() + " above ABC at n=" + std::to_string(n));
                break;
            }
    }
}

// 7. Coupling on the block pair.
void coupling(Outcome& o) {
    const Rational e(1, 10);
    StochMatrix p = fixtures::block_fast(e), q = fixtures::block_slow(e);
    const VedereWitness wit{{2, 1, 1}};
    BatchResult b = run_batch(CouplingSampler(p, q, wit), 100000, 20240601);
    o.require(b.violations.order == 0, std::to_string(b.violations.order) + " order violations");
    o.require(b.violations.identity == 0, std::to_string(b.violations.identity) + " identity violations");
    auto exact = hitting_cdf(q, 3, 600);
    const double ks = ks_distance(b.t_slow, exact.cdf);
    o.require(ks < 0.01, "KS distance " + std::to_string(ks));
    const double gap = (expected_hitting(q, 3) - expected_hitting(p, 3)).to_double();
    GapEstimate g = estimate_gap(p, q, wit, 100000, 20240601);
    o.require(std::abs(g.mean_diff - gap) <= g.ci_halfwidth,
              "gap CI [" + std::to_string(g.mean_diff - g.ci_halfwidth) + ", " + std::to_string(g.mean_diff + g.ci_halfwidth) +
                  "] misses " + std::to_string(gap));
}

// 8. Property suites.
void properties(Outcome& o) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::size_t> size_dist(2, 4);
    int closure_fail = 0;
    for (int accepted = 0; accepted < 200; ++accepted) {
        const std::size_t n = size_dist(rng);
        auto draw = [&]() {
            while (true) {
                StochMatrix a = fixtures::random_matrix(rng, n), b = fixtures::random_matrix(rng, n);
                if (triangle_leq(a, b)) return std::pair{a, b};
            }
        };
        auto [a, a2] = draw();
        auto [b, b2] = draw();
        if (!triangle_leq(a * b, a2 * b2)) ++closure_fail;
    }
    o.require(closure_fail == 0, std::to_string(closure_fail) + " product-closure failures");

    int power_fail = 0, certified = 0;
    for (int n_letters : {2, 3})
        for (auto [fw, sw] : {std::pair{"ABAAB", "ABABA"}, std::pair{"BAAAA", "ABBBA"}}) {
            StochMatrix f = word_chain(w(fw, n_letters)), s = word_chain(w(sw, n_letters));
            auto pair = find_coprime_pair(s, f, 64);
            if (!pair) continue;
            ++certified;
            const long n_hat = frobenius_threshold(pair->n1, pair->n2);
            for (long m = n_hat; m <= n_hat + 10; ++m)
                if (!triangle_leq(mat_pow(s, static_cast<unsigned>(m)), mat_pow(f, static_cast<unsigned>(m)))) ++power_fail;
        }
    o.require(certified > 0 && power_fail == 0, std::to_string(power_fail) + " power-closure failures over " +
                                                    std::to_string(certified) + " certified pairs");

    int frob_fail = 0;
    for (long a = 1; a <= 12; ++a)
        for (long b = a + 1; b <= 12; ++b) {
            if (std::gcd(a, b) != 1) continue;
            const long limit = a * b + a + b;
            std::vector<bool> rep(static_cast<std::size_t>(limit + 1));
            for (long x = 0; x * a <= limit; ++x)
                for (long y = 0; x * a + y * b <= limit; ++y) rep[static_cast<std::size_t>(x * a + y * b)] = true;
            long threshold = 0;
            for (long m = limit; m >= 0; --m)
                if (!rep[static_cast<std::size_t>(m)]) {
                    threshold = m + 1;
                    break;
                }
            if (frobenius_threshold(a, b) != threshold) ++frob_fail;
        }
    o.require(frob_fail == 0, std::to_string(frob_fail) + " Frobenius mismatches");

    // Word corpus: ternary words of length <= 4 and the named binary and
    // ternary words, kept when the taboo chain is ergodic.
    std::vector<Word> corpus;
    for (std::size_t k = 1; k <= 4; ++k)
        for (const auto& x : all_words(k, 3)) corpus.push_back(x);
    for (int n : {2, 3})
        for (const char* s : {"ABAAB", "ABABA", "ABBBA", "AABAA", "AAAAA", "AAAAB"}) corpus.push_back(w(s, n));
    int used = 0;
    double worst = 0;
    std::string worst_word;
    for (const auto& x : corpus) {
        StochMatrix p = word_chain(x);
        SpectralSummary s = spectral_summary(p, x.length());
        if (!s.ergodic_taboo) continue;
        ++used;
        const double dev = std::abs(large_deviation_rate(p, x.length(), 200) - std::log(1.0 - s.gap));
        if (dev > worst) {
            worst = dev;
            worst_word = x.str() + "/N=" + std::to_string(x.alphabet_size());
        }
    }
    o.require(used > 0 && worst < 1e-3, "large-deviation worst " + std::to_string(worst) + " at " + worst_word);
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
        {"conway means of ABBBA and AAAAB", conway_means},
        {"coprime-power certificate ABAAB vs ABABA", coprime_certificate},
        {"four-state block pair at eps=1/10", block_pair},
        {"bidiagonal pairs", bidiagonal_pairs},
        {"enumeration oracle k<=4, N in {2,3}, n<=12", enumeration},
        {"extremal words of length 3", extremal},
        {"coupling of the block pair, 1e5 paths", coupling},
        {"property suites", properties},
    };
    int failed = 0, index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            check(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %d %s (%.2fs)\n", o.ok ? "PASS" : "FAIL", index, name, secs);
        for (const auto& n : o.notes) std::printf("     %s\n", n.c_str());
        failed += !o.ok;
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
