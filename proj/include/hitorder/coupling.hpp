#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "hitorder/errors.hpp"
#include "hitorder/matrix.hpp"
#include "hitorder/order.hpp"
#include "hitorder/rational.hpp"

namespace hitorder {

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform variates U in (0,1) represented exactly as u / 2^64 with u >= 1.
/// Stream (seed, index, lane) is a pure function of its arguments, so
/// serial and parallel batch runs produce the same paths.
class UniformStream {
  public:
    UniformStream(std::uint64_t seed, std::uint64_t index, std::uint64_t lane)
        : engine_(splitmix64(splitmix64(splitmix64(seed) ^ index) ^ (lane * 0xD1B54A32D192ED03ULL))) {}

    std::uint64_t next() {
        std::uint64_t u = 0;
        while (u == 0) u = engine_();
        return u;
    }

  private:
    std::mt19937_64 engine_;
};

/// Inverse-CDF table for one distribution: state = inf{s : F(s) >= U}.
/// thresholds_[s] = floor(F(s) * 2^64), clamped to 2^64 - 1, so the
/// comparison with u / 2^64 is exact and ties go to the lower state.
class InverseCdf {
  public:
    InverseCdf() = default;
    explicit InverseCdf(std::span<const Rational> probs) {
        const mpz_class scale = mpz_class(1) << 64;
        const mpz_class cap = scale - 1;
        Rational cum(0);
        thresholds_.reserve(probs.size());
        for (const auto& p : probs) {
            cum += p;
            mpz_class t = (cum.numerator() * scale) / cum.denominator();
            if (t > cap) t = cap;
            thresholds_.push_back(static_cast<std::uint64_t>(mpz_get_ui(t.get_mpz_t())));
        }
    }

    std::size_t operator()(std::uint64_t u) const {
        auto it = std::lower_bound(thresholds_.begin(), thresholds_.end(), u);
        return static_cast<std::size_t>(it - thresholds_.begin());
    }

  private:
    std::vector<std::uint64_t> thresholds_;
};

// ---------------------------------------------------------------------------
// Block coupling of two skip-free chains
// ---------------------------------------------------------------------------

/// Block n of the coupled construction.
struct BlockRecord {
    std::size_t fast_state;  // I(n)
    std::size_t slow_state;  // Y~_n, drawn with the same uniform as I(n)
    std::uint64_t n1;        // first time the bridge chain visits Y~_n
    std::uint64_t n2;        // first time the bridge chain visits I(n)
};

struct CoupledPath {
    std::uint64_t t_fast = 0;        // T_k
    std::uint64_t t_slow = 0;        // T~_k, read off the glued slow trajectory
    std::uint64_t bridge_total = 0;  // sum_r (N2 - N1)
    std::vector<BlockRecord> blocks;  // n = 0..L
};

constexpr std::uint64_t kDefaultStepCap = 10'000'000;

/// Samples the coupling in which the fast chain moves in blocks of m(i)
/// steps and the slow chain is stitched together from block endpoints and
/// bridge segments. Both chains start from their initial laws (default
/// delta_0) and are followed until the fast chain reaches the top state.
class CouplingSampler {
  public:
    CouplingSampler(const StochMatrix& fast, const StochMatrix& slow, const VedereWitness& witness,
                    std::optional<ProbVector> pi_fast = std::nullopt, std::optional<ProbVector> pi_slow = std::nullopt,
                    std::uint64_t step_cap = kDefaultStepCap)
        : k_(fast.top()), m_(witness.m), step_cap_(step_cap) {
        if (fast.size() != slow.size()) throw SizeMismatch("coupling of matrices of different size");
        if (!is_skip_free(fast)) throw NotSkipFree("fast");
        if (!is_skip_free(slow)) throw NotSkipFree("slow");
        if (!witness_valid(fast, slow, witness)) throw WitnessInvalid("block lengths do not satisfy the block-step hypothesis");
        ProbVector pf = pi_fast.value_or(ProbVector::point_mass(fast.size(), 0));
        ProbVector ps = pi_slow.value_or(ProbVector::point_mass(fast.size(), 0));
        if (pf.size() != fast.size() || ps.size() != fast.size()) throw SizeMismatch("initial law of wrong length");
        if (!st_leq(ps, pf)) throw WitnessInvalid("initial laws are not ordered");
        init_fast_ = InverseCdf(pf.entries());
        init_slow_ = InverseCdf(ps.entries());

        detail::PowerSeq fp(fast), sp(slow);
        for (std::size_t i = 0; i < k_; ++i) {
            block_fast_.emplace_back(fp[m_[i]].row(i));
            block_slow_.emplace_back(sp[m_[i]].row(i));
        }
        for (std::size_t i = 0; i <= k_; ++i) step_slow_.emplace_back(slow.row(i));
    }

    CoupledPath sample(std::uint64_t seed, std::uint64_t index = 0) const {
        UniformStream main(seed, index, 0), bridge(seed, index, 1);
        CoupledPath path;
        std::uint64_t steps = 0;
        auto charge = [&](std::uint64_t n) {
            steps += n;
            if (steps > step_cap_) throw NonTermination("coupled path exceeded the step cap");
        };

        std::uint64_t u = main.next();
        std::size_t fast_state = init_fast_(u);
        std::size_t slow_state = init_slow_(u);
        std::uint64_t fast_time = 0, slow_time = 0;
        std::optional<std::uint64_t> slow_hit;

        while (true) {
            // Slow trajectory sits at Y~_r at time Z_r.
            if (!slow_hit && slow_state == k_) slow_hit = slow_time;

            // Bridge: a fresh slow chain from 0 run until it visits I(r).
            BlockRecord rec{fast_state, slow_state, 0, 0};
            std::size_t y = 0;
            std::uint64_t n = 0;
            bool seen_n1 = slow_state == 0;
            while (y != fast_state) {
                y = step_slow_[y](bridge.next());
                ++n;
                charge(1);
                if (!seen_n1 && y == slow_state) {
                    rec.n1 = n;
                    seen_n1 = true;
                } else if (seen_n1) {
                    // Glued segment: values after N1 up to N2.
                    ++slow_time;
                    if (!slow_hit && y == k_) slow_hit = slow_time;
                }
            }
            rec.n2 = n;
            path.bridge_total += rec.n2 - rec.n1;
            path.blocks.push_back(rec);
            if (fast_state == k_) break;

            // Next block: both endpoints from the same uniform.
            const std::size_t m = m_[fast_state];
            u = main.next();
            const std::size_t next_fast = block_fast_[fast_state](u);
            slow_state = block_slow_[fast_state](u);
            fast_state = next_fast;
            fast_time += m;
            slow_time += m;
            charge(m);
        }
        path.t_fast = fast_time;
        path.t_slow = slow_hit.value_or(std::numeric_limits<std::uint64_t>::max());
        return path;
    }

    std::size_t top() const { return k_; }

  private:
    std::size_t k_;
    std::vector<unsigned> m_;
    std::uint64_t step_cap_;
    InverseCdf init_fast_, init_slow_;
    std::vector<InverseCdf> block_fast_, block_slow_, step_slow_;
};

inline CoupledPath sample_coupled(const StochMatrix& fast, const StochMatrix& slow, const VedereWitness& witness,
                                  std::optional<ProbVector> pi_fast, std::optional<ProbVector> pi_slow,
                                  std::uint64_t seed) {
    return CouplingSampler(fast, slow, witness, std::move(pi_fast), std::move(pi_slow)).sample(seed, 0);
}

// ---------------------------------------------------------------------------
// Batches
// ---------------------------------------------------------------------------

struct Violations {
    std::uint64_t order = 0;     // t_fast > t_slow
    std::uint64_t identity = 0;  // t_slow != t_fast + bridge_total
    std::uint64_t block = 0;     // Y~_n > I(n)
    std::uint64_t bridge = 0;    // N1 > N2
    std::uint64_t total() const { return order + identity + block + bridge; }
};

struct BatchResult {
    std::uint64_t n = 0;
    double mean_diff = 0.0;
    double ci_halfwidth = 0.0;  // 95% normal approximation
    Violations violations;
    std::vector<std::uint64_t> t_fast;
    std::vector<std::uint64_t> t_slow;
};

inline Violations check_path(const CoupledPath& p) {
    Violations v;
    if (p.t_fast > p.t_slow) ++v.order;
    if (p.t_slow != p.t_fast + p.bridge_total) ++v.identity;
    for (const auto& b : p.blocks) {
        if (b.slow_state > b.fast_state) ++v.block;
        if (b.n1 > b.n2) ++v.bridge;
    }
    return v;
}

/// Paths use streams (seed, 0..n_samples-1).
inline BatchResult run_batch(const CouplingSampler& sampler, std::uint64_t n_samples, std::uint64_t seed,
                             bool keep_samples = true) {
    BatchResult out;
    out.n = n_samples;
    if (keep_samples) {
        out.t_fast.reserve(n_samples);
        out.t_slow.reserve(n_samples);
    }
    double mean = 0.0, m2 = 0.0;  // Welford
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        CoupledPath p = sampler.sample(seed, i);
        Violations v = check_path(p);
        out.violations.order += v.order;
        out.violations.identity += v.identity;
        out.violations.block += v.block;
        out.violations.bridge += v.bridge;
        const double d = static_cast<double>(p.t_slow) - static_cast<double>(p.t_fast);
        const double delta = d - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (d - mean);
        if (keep_samples) {
            out.t_fast.push_back(p.t_fast);
            out.t_slow.push_back(p.t_slow);
        }
    }
    out.mean_diff = mean;
    if (n_samples > 1) {
        const double var = m2 / static_cast<double>(n_samples - 1);
        out.ci_halfwidth = 1.959963984540054 * std::sqrt(var / static_cast<double>(n_samples));
    }
    return out;
}

struct GapEstimate {
    double mean_diff = 0.0;
    double ci_halfwidth = 0.0;
};

/// Mean of T~_k - T_k over coupled paths, with a 95% half-width.
inline GapEstimate estimate_gap(const StochMatrix& fast, const StochMatrix& slow, const VedereWitness& witness,
                                std::uint64_t n_samples, std::uint64_t seed) {
    BatchResult b = run_batch(CouplingSampler(fast, slow, witness), n_samples, seed, false);
    return {b.mean_diff, b.ci_halfwidth};
}

inline BatchResult verify_pathwise(const StochMatrix& fast, const StochMatrix& slow, const VedereWitness& witness,
                                   std::uint64_t n_samples, std::uint64_t seed) {
    return run_batch(CouplingSampler(fast, slow, witness), n_samples, seed, false);
}

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and
/// an exact cdf (extended by its last value past the horizon).
inline double ks_distance(std::span<const std::uint64_t> samples, std::span<const Rational> cdf) {
    if (samples.empty() || cdf.empty()) return 0.0;
    std::vector<std::uint64_t> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const std::uint64_t last = std::max<std::uint64_t>(sorted.back(), cdf.size() - 1);
    const double total = static_cast<double>(sorted.size());
    double worst = 0.0;
    std::size_t idx = 0;
    for (std::uint64_t t = 0; t <= last; ++t) {
        while (idx < sorted.size() && sorted[idx] <= t) ++idx;
        const double emp = static_cast<double>(idx) / total;
        const double exact = cdf[std::min<std::uint64_t>(t, cdf.size() - 1)].to_double();
        worst = std::max(worst, std::abs(emp - exact));
    }
    return worst;
}

}  // namespace hitorder
