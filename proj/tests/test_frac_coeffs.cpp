#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "tsfcde/errors.hpp"
#include "tsfcde/frac_coeffs.hpp"

using namespace tsfcde;

TEST(FractionalOrders, SigmaIsDerivedFromAlpha)
{
    const auto o = FractionalOrders::make(0.5, 1.8);
    EXPECT_EQ(o.sigma, 0.75);
    EXPECT_EQ(FractionalOrders::make(1.0, 2.0).sigma, 0.5);
}

TEST(FractionalOrders, RejectsOutOfRangeOrders)
{
    EXPECT_THROW(FractionalOrders::make(0.0, 1.5), DomainError);
    EXPECT_THROW(FractionalOrders::make(1.5, 1.5), DomainError);
    EXPECT_THROW(FractionalOrders::make(0.5, 1.0), DomainError);
    EXPECT_THROW(FractionalOrders::make(0.5, 2.1), DomainError);
}

TEST(GammaFn, KnownValues)
{
    EXPECT_NEAR(gamma_fn(1.0), 1.0, 1e-15);
    EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-15);
    // Frozen high-precision value.
    EXPECT_NEAR(gamma_fn(3.5) / 3.3233509704478425512 - 1.0, 0.0, 1e-14);
    EXPECT_NEAR(gamma_fn(3.5), 15.0 * std::sqrt(std::numbers::pi) / 8.0, 1e-14);
}

TEST(GammaFn, FactorialsAreExact)
{
    double fact = 1.0;
    for (int n = 1; n <= 10; ++n) {
        EXPECT_NEAR(gamma_fn(n) / fact - 1.0, 0.0, 1e-12) << "n = " << n;
        fact *= n;
    }
}

TEST(GammaFn, RejectsNonPositive)
{
    EXPECT_THROW(gamma_fn(0.0), DomainError);
    EXPECT_THROW(gamma_fn(-1.5), DomainError);
}

TEST(GrunwaldG, IntegerOrderIsBinomial)
{
    const auto g = grunwald_g(2.0, 4);
    const std::vector<double> expected{1, -2, 1, 0, 0};
    ASSERT_EQ(g.size(), expected.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_DOUBLE_EQ(g[k], expected[k]);
    }
}

TEST(GrunwaldG, SecondCoefficient)
{
    const auto g = grunwald_g(1.8, 2);
    EXPECT_EQ(g[0], 1.0);
    EXPECT_DOUBLE_EQ(g[1], -1.8);
    EXPECT_NEAR(g[2], 0.72, 1e-15);
    EXPECT_NEAR(grunwald_g(1.5, 2)[2], 0.375, 1e-15);
}

TEST(GrunwaldG, MatchesBinomialOracle)
{
    for (double beta : {1.1, 1.3, 1.5, 1.8, 1.99}) {
        const auto g = grunwald_g(beta, 50);
        for (std::size_t k = 0; k <= 50; ++k) {
            const double ref = oracle::binomial_g(beta, k);
            EXPECT_NEAR(g[k], ref, 1e-13 * std::abs(ref) + 1e-300) << "beta " << beta << " k " << k;
        }
    }
}

TEST(GrunwaldG, SignPattern)
{
    for (int i = 1; i < 100; ++i) {
        const double beta = 1.0 + 0.01 * i;
        const auto g = grunwald_g(beta, 200);
        EXPECT_NEAR(g[1], -beta, 1e-15);
        for (std::size_t k = 2; k < g.size(); ++k) {
            ASSERT_GT(g[k], 0.0) << "beta " << beta << " k " << k;
        }
    }
}

TEST(GrunwaldG, RejectsBadBeta)
{
    EXPECT_THROW(grunwald_g(1.0, 3), DomainError);
    EXPECT_THROW(grunwald_g(2.5, 3), DomainError);
}

TEST(ShiftedWeights, DegenerateAtBetaTwo)
{
    const auto sw = shifted_weights(2.0, 4);
    EXPECT_DOUBLE_EQ(sw.lambda1, 1.0);
    EXPECT_DOUBLE_EQ(sw.lambda0, 0.0);
    EXPECT_DOUBLE_EQ(sw.lambdam1, 0.0);
    const std::vector<double> expected{1, -2, 1, 0, 0};
    for (std::size_t k = 0; k < expected.size(); ++k) {
        EXPECT_DOUBLE_EQ(sw.omega[k], expected[k]);
    }
}

TEST(ShiftedWeights, FirstTwoWeights)
{
    const auto sw = shifted_weights(1.8, 1);
    EXPECT_NEAR(sw.omega[0], 0.88666666666666666667, 1e-15);
    EXPECT_NEAR(sw.omega[1], -1.4693333333333333333, 1e-15);
    EXPECT_NEAR(shifted_weights(1.5, 1).omega[1], -0.80208333333333333333, 1e-15);
    // omega_0 is lambda_1, which equals one only at beta = 2.
    EXPECT_DOUBLE_EQ(sw.omega[0], sw.lambda1);
}

TEST(ShiftedWeights, SignPatternOnGrid)
{
    for (int i = 1; i < 100; ++i) {
        const double beta = 1.0 + 0.01 * i;
        const auto sw = shifted_weights(beta, 300);
        const auto& w = sw.omega;
        ASSERT_LT(w[1], 0.0) << beta;
        ASSERT_GE(w[0] + w[2], 0.0) << beta;
        for (std::size_t k = 3; k < w.size(); ++k) {
            ASSERT_GT(w[k], 0.0) << "beta " << beta << " k " << k;
        }
    }
}

TEST(ShiftedWeights, PartialSumsNegativeAndDecaying)
{
    constexpr std::size_t K = 10000;
    for (double beta : {1.1, 1.5, 1.9}) {
        const auto sw = shifted_weights(beta, K);
        double s = 0.0;
        double s100 = 0.0;
        double ratio_max = 0.0;
        for (std::size_t k = 0; k <= K; ++k) {
            s += sw.omega[k];
            if (k > 1) {
                ASSERT_LT(s, 0.0) << "beta " << beta << " K " << k;
            }
            if (k == 100) {
                s100 = s;
            }
            if (k >= 100) {
                ratio_max = std::max(ratio_max, std::abs(s) / std::pow(static_cast<double>(k), 1.0 - beta));
            }
        }
        // |sum| <= C K^{1-beta}, with C fitted from the tail and then rechecked at K.
        EXPECT_LE(std::abs(s), ratio_max * std::pow(static_cast<double>(K), 1.0 - beta) * (1.0 + 1e-12));
        EXPECT_LT(std::abs(s), std::abs(s100));
    }
}

TEST(TimeWeights, AlphaOneDegeneracy)
{
    const auto tw = time_ab(1.0, 3, 0.1);
    ASSERT_EQ(tw.a.size(), 4u);
    EXPECT_DOUBLE_EQ(tw.a[0], 1.0);
    for (std::size_t l = 1; l < 4; ++l) {
        EXPECT_DOUBLE_EQ(tw.a[l], 0.0);
    }
    EXPECT_DOUBLE_EQ(tw.sigma, 0.5);
}

TEST(TimeWeights, ClosedFormsAtHalf)
{
    const auto tw = time_ab(0.5, 1, 0.1);
    EXPECT_NEAR(tw.a[0], 0.86602540378443864676, 1e-15);
    EXPECT_NEAR(tw.b[1], 0.015891699903758216737, 1e-15);
    EXPECT_EQ(tw.b[0], 0.0);
    EXPECT_NEAR(tw.gamma2ma, std::tgamma(1.5), 1e-15);
}

TEST(TimeWeights, TelescopingAndPositivity)
{
    for (double alpha : {0.1, 0.5, 0.9, 0.99}) {
        const auto tw = time_ab(alpha, 500, 0.01);
        double s = 0.0;
        for (std::size_t j = 0; j <= 500; ++j) {
            s += tw.a[j];
            if (j >= 1) {
                ASSERT_GT(tw.a[j], 0.0);
            }
            ASSERT_NEAR(s / std::pow(j + tw.sigma, 1.0 - alpha), 1.0, 1e-12) << alpha << " " << j;
        }
    }
}

TEST(TimeWeights, RejectsBadArguments)
{
    EXPECT_THROW(time_ab(0.0, 3, 0.1), DomainError);
    EXPECT_THROW(time_ab(0.5, 0, 0.1), DomainError);
    EXPECT_THROW(time_ab(0.5, 3, 0.0), DomainError);
}

TEST(TimeCRow, LevelZeroAndOne)
{
    const auto tw = time_ab(0.5, 4, 0.1);
    const auto c0 = time_c_row(tw, 0);
    ASSERT_EQ(c0.size(), 1u);
    EXPECT_EQ(c0[0], tw.a[0]);
    const auto c1 = time_c_row(tw, 1);
    ASSERT_EQ(c1.size(), 2u);
    EXPECT_DOUBLE_EQ(c1[0], tw.a[0] + tw.b[1]);
    EXPECT_DOUBLE_EQ(c1[1], tw.a[1] - tw.b[1]);
}

TEST(TimeCRow, MatchesDefinition)
{
    const auto tw = time_ab(0.3, 20, 0.05);
    for (std::size_t j = 0; j < 20; ++j) {
        const auto c = time_c_row(tw, j);
        const auto ref = oracle::c_row(0.3, j);
        ASSERT_EQ(c.size(), ref.size());
        for (std::size_t m = 0; m < c.size(); ++m) {
            EXPECT_NEAR(c[m], ref[m], 1e-13) << j << " " << m;
        }
    }
}

TEST(TimeCRow, RowSumTelescopes)
{
    const auto tw5 = time_ab(0.5, 6, 0.1);
    const auto c5 = time_c_row(tw5, 5);
    EXPECT_NEAR(std::accumulate(c5.begin(), c5.end(), 0.0), std::pow(5.75, 0.5), 1e-13);

    for (double alpha : {0.1, 0.5, 0.9, 0.99}) {
        const auto tw = time_ab(alpha, 1001, 0.001);
        for (std::size_t j = 0; j <= 1000; j += 37) {
            const auto c = time_c_row(tw, j);
            const double s = std::accumulate(c.begin(), c.end(), 0.0);
            EXPECT_NEAR(s / std::pow(j + tw.sigma, 1.0 - alpha), 1.0, 1e-11) << alpha << " " << j;
        }
    }
}

TEST(TimeCRow, PositiveOnAlphaGrid)
{
    for (int i = 1; i < 100; ++i) {
        const double alpha = 0.01 * i;
        const auto tw = time_ab(alpha, 101, 0.01);
        for (std::size_t j = 0; j <= 100; ++j) {
            for (double c : time_c_row(tw, j)) {
                ASSERT_GT(c, 0.0) << "alpha " << alpha << " j " << j;
            }
        }
    }
}

TEST(TimeCRow, RejectsLevelBeyondWeights)
{
    const auto tw = time_ab(0.5, 3, 0.1);
    EXPECT_NO_THROW(time_c_row(tw, 2));
    EXPECT_THROW(time_c_row(tw, 3), DomainError);
}

TEST(Eta, ClosedForms)
{
    const auto tw1 = time_ab(1.0, 3, 0.1);
    EXPECT_NEAR(eta(tw1, 0), 10.0, 1e-12);

    const auto tw = time_ab(0.5, 10, 0.05);
    EXPECT_NEAR(eta(tw, 0), 4.3701937223683162822, 1e-13);
    EXPECT_NEAR(eta(tw, 0), 0.86602540378443864676 / (std::sqrt(0.05) * std::tgamma(1.5)), 1e-13);
    EXPECT_EQ(eta(tw, 2), eta(tw, 7));
    EXPECT_NEAR(eta(tw, 1), (tw.a[0] + tw.b[1]) / (std::sqrt(0.05) * tw.gamma2ma), 1e-13);
}
