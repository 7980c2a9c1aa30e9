#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace hitorder;
using fixtures::mat;

TEST(HittingCdf, SameLawPairHasIdenticalCdfs) {
    StochMatrix a = fixtures::bidiagonal(Rational(1, 3), Rational(1, 2));
    StochMatrix b = fixtures::bidiagonal(Rational(1, 2), Rational(1, 3));
    auto da = hitting_cdf(a, 2, 50), db = hitting_cdf(b, 2, 50);
    EXPECT_EQ(da.cdf, db.cdf);
    EXPECT_EQ(da.horizon(), 50u);
}

TEST(HittingCdf, IsNondecreasingAndStartsAtZero) {
    auto d = hitting_cdf(fixtures::block_slow(Rational(1, 10)), 3, 80);
    EXPECT_EQ(d.cdf[0], Rational(0));
    for (std::size_t n = 1; n < d.cdf.size(); ++n) {
        EXPECT_LE(d.cdf[n - 1], d.cdf[n]);
        EXPECT_LE(d.cdf[n], Rational(1));
        EXPECT_GE(d.pmf(n), Rational(0));
    }
}

TEST(HittingCdf, RejectsTransientTarget) {
    EXPECT_THROW(hitting_cdf(fixtures::block_slow(Rational(1, 10)), 1, 10), NotAbsorbing);
}

TEST(ExpectedHitting, SumOfGeometricMeans) {
    // 1/(1-a) + 1/(1-b) with a = 1/3, b = 1/2.
    EXPECT_EQ(expected_hitting(fixtures::bidiagonal(Rational(1, 3), Rational(1, 2)), 2), Rational(7, 2));
    EXPECT_EQ(expected_hitting(fixtures::bidiagonal(Rational(1, 2), Rational(1, 3)), 2), Rational(7, 2));
}

TEST(ExpectedHitting, DivergesWhenTargetUnreachable) {
    StochMatrix p = mat({{Rational(1, 2), Rational(1, 2), 0}, {Rational(1, 2), Rational(1, 2), 0}, {0, 0, 1}});
    EXPECT_THROW(expected_hitting(p, 2), Divergent);
    // A trap state also makes the mean infinite.
    StochMatrix q = mat({{0, Rational(1, 2), Rational(1, 2)}, {0, 1, 0}, {0, 0, 1}});
    EXPECT_THROW(expected_hitting(q, 2), Divergent);
}

TEST(ExpectedHitting, MatchesTruncatedSeries) {
    StochMatrix p = fixtures::block_fast(Rational(1, 10));
    Rational mean = expected_hitting(p, 3);
    auto d = hitting_cdf(p, 3, 400);
    double series = 0;
    for (std::size_t n = 0; n < d.cdf.size(); ++n) series += 1.0 - d.cdf[n].to_double();
    EXPECT_NEAR(series, mean.to_double(), 1e-9);
}

TEST(Falsify, FindsFirstViolation) {
    StochMatrix fast = fixtures::bidiagonal(Rational(1, 2), Rational(1, 3));
    StochMatrix slow = fixtures::bidiagonal(Rational(1, 2), Rational(1, 4));
    EXPECT_EQ(falsify_order(fast, slow), std::optional<unsigned>(2));
    EXPECT_FALSE(falsify_order(slow, fast));
}

TEST(AsymptoticCertificate, SameLawPairIsInconclusive) {
    StochMatrix a = fixtures::bidiagonal(Rational(1, 3), Rational(1, 2));
    StochMatrix b = fixtures::bidiagonal(Rational(1, 2), Rational(1, 3));
    EXPECT_EQ(certify_ast_order(a, b).verdict, Verdict::Inconclusive);
}

TEST(AsymptoticCertificate, StCertificateImpliesAsymptoticOne) {
    for (const auto& f : fixtures::all_words(3, 2))
        for (const auto& s : fixtures::all_words(3, 2)) {
            StochMatrix pf = word_chain(f), ps = word_chain(s);
            if (certify_st_order(pf, ps, 24).verdict == Verdict::StCertified) {
                EXPECT_EQ(certify_ast_order(pf, ps, 24).verdict, Verdict::AstCertified) << f.str() << " " << s.str();
            }
        }
}
