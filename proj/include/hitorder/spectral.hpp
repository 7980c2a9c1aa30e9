#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "hitorder/errors.hpp"
#include "hitorder/matrix.hpp"

namespace hitorder {

struct SpectralSummary {
    std::vector<double> moduli;  // descending
    double mu = 0.0;             // modulus of the second eigenvalue
    double gap = 1.0;            // 1 - mu
    bool ergodic_taboo = false;
};

/// Eigenvalue moduli of M in descending order (dense Hessenberg-QR solver).
inline std::vector<double> eigen_moduli(const StochMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).to_double();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw EigenFailure("eigenvalue iteration did not converge");
    std::vector<double> out;
    out.reserve(m.size());
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(std::abs(solver.eigenvalues()[i]));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

inline SpectralSummary spectral_summary(const StochMatrix& m, std::size_t target) {
    if (!is_absorbing(m, target)) throw NotAbsorbing("input");
    SpectralSummary s;
    s.moduli = eigen_moduli(m);
    s.mu = s.moduli.size() > 1 ? std::min(1.0, s.moduli[1]) : 0.0;
    s.gap = std::clamp(1.0 - s.mu, 0.0, 1.0);
    try {
        s.ergodic_taboo = m.size() > 1 && is_ergodic(taboo(m, target));
    } catch (const TabooDegenerate&) {
        s.ergodic_taboo = false;
    }
    return s;
}

enum class VicevPrediction { Predicted, NotPredicted };

inline const char* to_string(VicevPrediction p) {
    return p == VicevPrediction::Predicted ? "Predicted" : "NotPredicted";
}

/// Sufficient spectral test for slow^n <| fast^n eventually: ergodic taboo
/// chain for the slow matrix and a strictly smaller spectral gap.
inline VicevPrediction vicev_predict(const StochMatrix& slow, const StochMatrix& fast, std::size_t target,
                                     double tol = 1e-9) {
    SpectralSummary s = spectral_summary(slow, target);
    SpectralSummary f = spectral_summary(fast, target);
    if (s.ergodic_taboo && s.gap < f.gap - tol) return VicevPrediction::Predicted;
    return VicevPrediction::NotPredicted;
}

/// (1/n) ln(1 - p^{(n)}_{0,target}) from the exact n-step law.
inline double large_deviation_rate(const StochMatrix& m, std::size_t target, unsigned n) {
    if (n < 1) throw IndexError("large_deviation_rate needs n >= 1");
    if (!is_absorbing(m, target)) throw NotAbsorbing("input");
    ProbVector v = ProbVector::point_mass(m.size(), 0);
    for (unsigned i = 0; i < n; ++i) v = v * m;
    Rational tail = Rational(1) - v[target];
    if (tail.is_zero()) throw DegenerateTail("target reached with probability 1 by step " + std::to_string(n));
    return tail.log() / static_cast<double>(n);
}

}  // namespace hitorder
