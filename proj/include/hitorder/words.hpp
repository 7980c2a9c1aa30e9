#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hitorder/errors.hpp"
#include "hitorder/hitting.hpp"
#include "hitorder/matrix.hpp"
#include "hitorder/order.hpp"
#include "hitorder/rational.hpp"
#include "hitorder/spectral.hpp"

namespace hitorder {

/// Word w_1..w_k over the alphabet {1..N}, letters drawn uniformly at random.
/// Letters are 1-based indices; A, B, C, ... is only their rendering.
class Word {
  public:
    Word(std::vector<int> letters, int alphabet_size) : letters_(std::move(letters)), n_(alphabet_size) {
        if (letters_.empty()) throw ParseError("a word has at least one letter");
        if (n_ < 1) throw AlphabetTooSmall("alphabet size must be positive");
        for (int a : letters_)
            if (a < 1 || a > n_) throw AlphabetTooSmall("letter index " + std::to_string(a) + " outside alphabet of size " + std::to_string(n_));
    }

    /// "ABBBA" with alphabet size N.
    static Word parse(std::string_view text, int alphabet_size) {
        std::vector<int> letters;
        for (char c : text) {
            if (c < 'A' || c > 'Z') throw ParseError("word letters must be upper-case A-Z, got '" + std::string(text) + "'");
            letters.push_back(c - 'A' + 1);
        }
        return Word(std::move(letters), alphabet_size);
    }

    std::size_t length() const { return letters_.size(); }
    int alphabet_size() const { return n_; }
    const std::vector<int>& letters() const { return letters_; }
    int operator[](std::size_t i) const { return letters_[i]; }

    Word prefix(std::size_t len) const {
        return Word(std::vector<int>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(len)), n_);
    }
    Word with_alphabet(int alphabet_size) const { return Word(letters_, alphabet_size); }

    std::string str() const {
        std::string out;
        for (int a : letters_) out.push_back(a <= 26 ? static_cast<char>('A' + a - 1) : '?');
        return out;
    }

    friend bool operator==(const Word&, const Word&) = default;

  private:
    std::vector<int> letters_;
    int n_;
};

/// eps(u) = 1 iff the length-u suffix equals the length-u prefix.
struct LeadingNumber {
    std::vector<bool> bits;

    std::string str() const {
        std::string s;
        for (bool b : bits) s.push_back(b ? '1' : '0');
        return s;
    }
    static LeadingNumber parse(std::string_view s) {
        LeadingNumber e;
        for (char c : s) {
            if (c != '0' && c != '1') throw ParseError("leading number must be a 0/1 string");
            e.bits.push_back(c == '1');
        }
        return e;
    }
    friend bool operator==(const LeadingNumber&, const LeadingNumber&) = default;
};

inline LeadingNumber leading_number(const Word& w) {
    const auto& x = w.letters();
    const std::size_t k = x.size();
    LeadingNumber e;
    e.bits.resize(k);
    for (std::size_t u = 1; u <= k; ++u) e.bits[u - 1] = std::equal(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(u), x.end() - static_cast<std::ptrdiff_t>(u));
    return e;
}

/// Expected waiting time sum_u N^u eps(u).
inline Rational conway_mean(const Word& w) {
    LeadingNumber e = leading_number(w);
    Rational sum(0), power(1);
    for (std::size_t u = 1; u <= w.length(); ++u) {
        power *= Rational(w.alphabet_size());
        if (e.bits[u - 1]) sum += power;
    }
    return sum;
}

namespace detail {

/// Prefix-function automaton: next[i][a-1] is the length of the longest
/// suffix of (w_1..w_i a) that is a prefix of w, capped at k.
inline std::vector<std::vector<std::size_t>> occurrence_automaton(const Word& w) {
    const std::size_t k = w.length();
    const int n = w.alphabet_size();
    std::vector<std::size_t> fail(k + 1, 0);
    for (std::size_t i = 1, j = 0; i < k; ++i) {
        while (j > 0 && w[i] != w[j]) j = fail[j];
        if (w[i] == w[j]) ++j;
        fail[i + 1] = j;
    }
    std::vector<std::vector<std::size_t>> next(k + 1, std::vector<std::size_t>(static_cast<std::size_t>(n)));
    for (std::size_t i = 0; i <= k; ++i)
        for (int a = 1; a <= n; ++a) {
            if (i < k && w[i] == a)
                next[i][a - 1] = i + 1;
            else if (i == 0)
                next[i][a - 1] = 0;
            else
                next[i][a - 1] = next[fail[i]][a - 1];
        }
    return next;
}

}  // namespace detail

/// Occurrence chain over states {0..k}: state i means the longest suffix of
/// the letters read so far that is a prefix of w has length i.
inline StochMatrix word_chain(const Word& w, bool absorbing = true) {
    const std::size_t k = w.length();
    auto next = detail::occurrence_automaton(w);
    const Rational step(1, w.alphabet_size());
    std::vector<std::vector<Rational>> rows(k + 1, std::vector<Rational>(k + 1, Rational(0)));
    for (std::size_t i = 0; i <= k; ++i) {
        if (i == k && absorbing) {
            rows[k][k] = Rational(1);
            continue;
        }
        for (std::size_t target : next[i]) rows[i][target] += step;
    }
    return StochMatrix::validate(rows);
}

inline std::set<int> minimal_alphabet(const Word& w) { return {w.letters().begin(), w.letters().end()}; }

struct ExtremalWords {
    Word max_word;                 // a^k: stochastically largest occurrence time
    std::optional<Word> min_word;  // a_1 a_2 .. a_k when N >= k: stochastically smallest
};

inline ExtremalWords extremal_words(std::size_t k, int alphabet_size) {
    if (k < 1) throw IndexError("word length must be positive");
    if (alphabet_size < 2) throw AlphabetTooSmall("extremal words need N >= 2");
    ExtremalWords out{Word(std::vector<int>(k, 1), alphabet_size), std::nullopt};
    if (static_cast<std::size_t>(alphabet_size) >= k) {
        std::vector<int> letters(k);
        for (std::size_t i = 0; i < k; ++i) letters[i] = static_cast<int>(i) + 1;
        out.min_word = Word(std::move(letters), alphabet_size);
    }
    return out;
}

inline bool is_all_distinct_leading(const LeadingNumber& e) {
    for (std::size_t u = 0; u + 1 < e.bits.size(); ++u)
        if (e.bits[u]) return false;
    return true;
}

enum class Extension { Holds, Fails, NotApplicable };

inline const char* to_string(Extension e) {
    switch (e) {
        case Extension::Holds: return "Holds";
        case Extension::Fails: return "Fails";
        case Extension::NotApplicable: return "NotApplicable";
    }
    return "?";
}

namespace detail {

/// Relabels the union of both words' letters onto 1..u in order of first
/// appearance; chains only depend on which letters coincide.
inline std::pair<std::vector<int>, std::vector<int>> joint_relabel(const Word& a, const Word& b, std::size_t& used) {
    std::map<int, int> code;
    auto map_word = [&](const Word& w) {
        std::vector<int> out;
        for (int x : w.letters()) {
            auto [it, fresh] = code.try_emplace(x, static_cast<int>(code.size()) + 1);
            out.push_back(it->second);
        }
        return out;
    };
    auto ra = map_word(a);
    auto rb = map_word(b);
    used = code.size();
    return {ra, rb};
}

}  // namespace detail

/// Whether row-wise dominance of (fast, slow) at their own alphabet size
/// survives rebuilding both chains over an alphabet of size `extended`.
inline Extension alphabet_extension_preserves(const Word& fast, const Word& slow, int extended) {
    if (fast.alphabet_size() != slow.alphabet_size()) throw AlphabetMismatch("words over different alphabets");
    std::size_t used = 0;
    auto [rf, rs] = detail::joint_relabel(fast, slow, used);
    if (extended < static_cast<int>(used)) throw AlphabetTooSmall("extended alphabet smaller than the union of minimal alphabets");
    if (!rowwise_dominates(word_chain(fast), word_chain(slow))) return Extension::NotApplicable;
    Word ef(rf, extended), es(rs, extended);
    return rowwise_dominates(word_chain(ef), word_chain(es)) ? Extension::Holds : Extension::Fails;
}

namespace detail {

constexpr std::size_t kMaxSearchLength = 10;
constexpr int kMaxSearchAlphabet = 4;

/// Calls f on every word of length k over {1..N} in lexicographic order
/// until f returns true.
template <typename F>
void for_each_word(std::size_t k, int n, F&& f) {
    std::vector<int> letters(k, 1);
    while (true) {
        if (f(Word(letters, n))) return;
        std::size_t pos = k;
        while (pos > 0 && letters[pos - 1] == n) letters[--pos] = 1;
        if (pos == 0) return;
        ++letters[pos - 1];
    }
}

}  // namespace detail

/// All words with leading number `target` over an alphabet of size N, in
/// lexicographic order (exhaustive, k <= 10 and N <= 4).
inline std::vector<Word> words_with_leading(const LeadingNumber& target, int alphabet_size, std::size_t limit = SIZE_MAX) {
    const std::size_t k = target.bits.size();
    if (k == 0) throw IndexError("empty leading number");
    if (k > detail::kMaxSearchLength || alphabet_size > detail::kMaxSearchAlphabet)
        throw Error("leading-number search is limited to k <= 10 and N <= 4");
    std::vector<Word> out;
    if (!target.bits.back()) return out;
    detail::for_each_word(k, alphabet_size, [&](const Word& w) {
        if (leading_number(w) == target) out.push_back(w);
        return out.size() >= limit;
    });
    return out;
}

/// First word (lexicographically) with leading number `target`, other than
/// `exclude` when given.
inline std::optional<Word> substitute_by_leading(const LeadingNumber& target, int alphabet_size,
                                                 const std::optional<Word>& exclude = std::nullopt) {
    for (auto& w : words_with_leading(target, alphabet_size, 2))
        if (!exclude || !(w == *exclude)) return w;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Comparison pipeline
// ---------------------------------------------------------------------------

struct CompareOptions {
    unsigned n_max = 64;
    unsigned horizon = 200;
    bool try_substitution = true;
    std::size_t substitution_budget = 64;  // candidate words per side
};

struct Substitution {
    Word fast;
    Word slow;
    OrderCertificate certificate;
};

struct WordComparison {
    Word fast, slow;
    LeadingNumber eps_fast, eps_slow;
    Rational mean_fast, mean_slow;
    bool equal_laws = false;  // identical leading numbers
    bool rowwise = false;
    std::optional<VedereWitness> block_witness{};
    std::optional<ServeCheck> serve{};
    std::string serve_level_reason{};
    OrderCertificate st{};
    OrderCertificate ast{};
    std::optional<VicevPrediction> vicev{};
    std::optional<unsigned> falsified_at{};
    std::optional<Substitution> substitution{};

    Verdict verdict = Verdict::Inconclusive;
    std::string via{};  // which result carried the strongest conclusion
};

namespace detail {

/// Word-level decision of T_{fast prefix} <=st T_{slow prefix}.
inline std::pair<LevelRoute, std::string> word_level_route(const Word& fast, const Word& slow, unsigned m, unsigned n_max) {
    Word pf = fast.prefix(m), ps = slow.prefix(m);
    LeadingNumber ef = leading_number(pf), es = leading_number(ps);
    if (ef == es) return {LevelRoute::External, "equal leading numbers of the length-" + std::to_string(m) + " prefixes"};
    if (is_all_distinct_leading(ef) && static_cast<std::size_t>(fast.alphabet_size()) >= m)
        return {LevelRoute::External, "fast prefix " + pf.str() + " has the minimal leading number"};
    if (minimal_alphabet(ps).size() == 1) return {LevelRoute::External, "slow prefix " + ps.str() + " is a constant word"};
    LevelRoute r = compare_level(word_chain(fast), word_chain(slow), m, n_max);
    return {r, std::string("matrix route: ") + to_string(r)};
}

}  // namespace detail

/// Runs every criterion on T_fast <=st T_slow and keeps the strongest result.
inline WordComparison compare_words(const Word& fast, const Word& slow, const CompareOptions& opt = {}) {
    if (fast.alphabet_size() != slow.alphabet_size()) throw AlphabetMismatch("words over different alphabets");
    if (fast.length() != slow.length()) throw SizeMismatch("words of different length");

    WordComparison r{.fast = fast,
                     .slow = slow,
                     .eps_fast = leading_number(fast),
                     .eps_slow = leading_number(slow),
                     .mean_fast = conway_mean(fast),
                     .mean_slow = conway_mean(slow)};
    const StochMatrix pf = word_chain(fast), ps = word_chain(slow);
    const std::size_t k = fast.length();

    r.equal_laws = r.eps_fast == r.eps_slow;
    r.rowwise = rowwise_dominates(pf, ps);
    r.block_witness = check_vedere(pf, ps, static_cast<unsigned>(k));
    for (unsigned m = 1; m + 1 <= k; ++m) {
        if (!serve_upper_rows(pf, ps, m)) continue;
        auto [route, reason] = detail::word_level_route(fast, slow, m, opt.n_max);
        r.serve = check_serve(pf, ps, m, opt.n_max, route);
        r.serve_level_reason = reason;
        if (r.serve->holds()) break;
    }
    r.st = certify_st_order(pf, ps, opt.n_max);
    r.ast = certify_ast_order(pf, ps, opt.n_max);
    try {
        r.vicev = vicev_predict(ps, pf, k);
    } catch (const EigenFailure&) {
        r.vicev.reset();
    }
    r.falsified_at = falsify_order(pf, ps, opt.horizon);

    if (r.equal_laws) {
        r.verdict = Verdict::StCertified;
        r.via = "equal leading numbers";
    } else if (r.falsified_at) {
        r.verdict = Verdict::Falsified;
        r.via = "exact cdf comparison";
    } else if (r.rowwise) {
        r.verdict = Verdict::StCertified;
        r.via = "row-wise dominance";
    } else if (r.block_witness) {
        r.verdict = Verdict::StCertified;
        r.via = "block-step coupling";
    } else if (r.serve && r.serve->holds()) {
        r.verdict = Verdict::StCertified;
        r.via = "restart level m=" + std::to_string(r.serve->m);
    } else if (r.st.verdict == Verdict::StCertified) {
        r.verdict = Verdict::StCertified;
        r.via = "coprime powers with prefix check";
    }

    if (r.verdict != Verdict::StCertified && r.verdict != Verdict::Falsified && opt.try_substitution &&
        k <= detail::kMaxSearchLength && fast.alphabet_size() <= detail::kMaxSearchAlphabet) {
        auto fasts = words_with_leading(r.eps_fast, fast.alphabet_size(), opt.substitution_budget);
        auto slows = words_with_leading(r.eps_slow, slow.alphabet_size(), opt.substitution_budget);
        // Keep the slow word and vary the fast one first, then vary both.
        auto try_pair = [&](const Word& zf, const Word& zs) {
            OrderCertificate c = certify_st_order(word_chain(zf), word_chain(zs), opt.n_max);
            if (c.verdict != Verdict::StCertified) return false;
            r.substitution = Substitution{zf, zs, c};
            return true;
        };
        bool done = false;
        for (const auto& zf : fasts)
            if (!done && !(zf == fast)) done = try_pair(zf, slow);
        for (const auto& zs : slows)
            for (const auto& zf : fasts)
                if (!done && !(zs == slow)) done = try_pair(zf, zs);
        if (done) {
            r.verdict = Verdict::StCertified;
            r.via = "leading-number substitution " + r.substitution->fast.str() + " / " + r.substitution->slow.str();
        }
    }

    if (r.verdict == Verdict::Inconclusive && r.ast.verdict == Verdict::AstCertified) {
        r.verdict = Verdict::AstCertified;
        r.via = "coprime powers";
    }
    return r;
}

}  // namespace hitorder
