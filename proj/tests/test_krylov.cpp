#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tsfcde/dense.hpp"
#include "tsfcde/errors.hpp"
#include "tsfcde/krylov.hpp"
#include "tsfcde/toeplitz.hpp"

using namespace tsfcde;

namespace {

LinearOperator dense_operator(const DenseMatrix& a)
{
    return LinearOperator{a.rows(), [&a](std::span<const double> x, std::span<double> y) { a.multiply(x, y); }};
}

LinearOperator lu_operator(const LuFactorization& lu)
{
    return LinearOperator{lu.size(), [&lu](std::span<const double> x, std::span<double> y) { lu.solve(x, y); }};
}

DenseMatrix random_dominant(std::mt19937_64& rng, std::size_t n, double margin = 1.0)
{
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                a(i, j) = oracle::random_vector(rng, 1)[0];
                off += std::abs(a(i, j));
            }
        }
        a(i, i) = off + margin;
    }
    return a;
}

}  // namespace

TEST(Cgs, IdentityConvergesImmediately)
{
    const auto id = DenseMatrix::identity(10);
    std::mt19937_64 rng(301);
    const auto b = oracle::random_vector(rng, 10);
    const auto res = cgs(dense_operator(id), std::nullopt, b);
    EXPECT_TRUE(res.report.converged);
    EXPECT_LE(res.report.iterations, 1);
    EXPECT_LE(oracle::max_abs_diff(res.x, b), 1e-15);
    EXPECT_EQ(res.report.residual_history.front(), 1.0);
}

TEST(Cgs, PreconditionerEqualToDiagonalOperator)
{
    DenseMatrix d(8, 8);
    for (std::size_t i = 0; i < 8; ++i) {
        d(i, i) = 2.0;
    }
    const LuFactorization lu(d);
    const std::vector<double> b{1, 2, 3, 4, 5, 6, 7, 8};
    for (bool precondition : {false, true}) {
        const auto res = precondition ? cgs(dense_operator(d), lu_operator(lu), b) : cgs(dense_operator(d), std::nullopt, b);
        EXPECT_TRUE(res.report.converged);
        EXPECT_LE(res.report.iterations, 1);
        for (std::size_t i = 0; i < 8; ++i) {
            EXPECT_NEAR(res.x[i], b[i] / 2.0, 1e-15);
        }
    }
}

TEST(Cgs, RandomNonsymmetricMatchesLu)
{
    std::mt19937_64 rng(303);
    const auto a = random_dominant(rng, 32);
    const auto b = oracle::random_vector(rng, 32);
    const auto res = cgs(dense_operator(a), std::nullopt, b, {1e-12, 1000});
    ASSERT_TRUE(res.report.converged);
    EXPECT_LT(res.report.relative_residual, 1e-12);
    const auto ref = dense_lu_solve(a, b);
    EXPECT_LE(oracle::max_abs_diff(res.x, ref) / oracle::max_abs(ref), 1e-10);
}

TEST(Cgs, ExactInverseAsPreconditioner)
{
    std::mt19937_64 rng(305);
    for (std::size_t n : {5u, 16u, 64u}) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto a = random_dominant(rng, n);
            const LuFactorization lu(a);
            const auto b = oracle::random_vector(rng, n);
            const auto res = cgs(dense_operator(a), lu_operator(lu), b);
            EXPECT_TRUE(res.report.converged);
            EXPECT_LE(res.report.iterations, 2) << n;
        }
    }
}

TEST(Cgs, InitialGuessIndependence)
{
    std::mt19937_64 rng(307);
    const auto a = random_dominant(rng, 24, 5.0);
    const auto b = oracle::random_vector(rng, 24);
    const auto x0 = oracle::random_vector(rng, 24, -10.0, 10.0);
    const auto cold = cgs(dense_operator(a), std::nullopt, b);
    const auto warm = cgs(dense_operator(a), std::nullopt, b, {}, x0);
    ASSERT_TRUE(cold.report.converged);
    ASSERT_TRUE(warm.report.converged);
    EXPECT_LE(oracle::max_abs_diff(cold.x, warm.x) / oracle::max_abs(cold.x), 1e-9);
}

TEST(Cgs, HistoryIsNormalizedAndFinite)
{
    std::mt19937_64 rng(309);
    const auto a = random_dominant(rng, 20);
    const auto b = oracle::random_vector(rng, 20);
    const auto res = cgs(dense_operator(a), std::nullopt, b);
    ASSERT_FALSE(res.report.residual_history.empty());
    EXPECT_EQ(res.report.residual_history[0], 1.0);
    EXPECT_EQ(res.report.residual_history.size(), static_cast<std::size_t>(res.report.iterations) + 1);
    for (double r : res.report.residual_history) {
        EXPECT_TRUE(std::isfinite(r));
    }
    EXPECT_EQ(res.report.residual_history.back(), res.report.relative_residual);
}

TEST(Cgs, ZeroRightHandSide)
{
    const auto id = DenseMatrix::identity(4);
    const auto res = cgs(dense_operator(id), std::nullopt, std::vector<double>(4, 0.0));
    EXPECT_TRUE(res.report.converged);
    EXPECT_EQ(res.report.iterations, 0);
    EXPECT_EQ(oracle::max_abs(res.x), 0.0);
}

TEST(Cgs, MaxitReachedIsReportedNotThrown)
{
    std::mt19937_64 rng(311);
    const auto a = random_dominant(rng, 40, 0.01);
    const auto b = oracle::random_vector(rng, 40);
    CgsOptions opt;
    opt.maxit = 2;
    const auto res = cgs(dense_operator(a), std::nullopt, b, opt);
    EXPECT_FALSE(res.report.converged);
    EXPECT_LE(res.report.iterations, 2);
    EXPECT_GT(res.report.relative_residual, 0.0);
}

TEST(Cgs, BreakdownCarriesIteration)
{
    // A skew operator makes (r~, A r) vanish at the first step.
    DenseMatrix a(2, 2);
    a(0, 1) = 1.0;
    a(1, 0) = -1.0;
    try {
        cgs(dense_operator(a), std::nullopt, std::vector<double>{1.0, 0.0});
        FAIL() << "expected BreakdownError";
    } catch (const BreakdownError& e) {
        EXPECT_EQ(e.iteration(), 1);
    }
}

TEST(Cgs, NonFiniteIterateIsDivergence)
{
    const LinearOperator bad{3, [](std::span<const double> x, std::span<double> y) {
                                 for (std::size_t i = 0; i < x.size(); ++i) {
                                     y[i] = x[i] * 1e200 * 1e200;
                                 }
                             }};
    EXPECT_THROW(cgs(bad, std::nullopt, std::vector<double>{1.0, 1.0, 1.0}), std::exception);
}

TEST(Cgs, ArgumentChecks)
{
    const auto id = DenseMatrix::identity(3);
    EXPECT_THROW(cgs(dense_operator(id), std::nullopt, std::vector<double>(2)), DimensionError);
    EXPECT_THROW(cgs(dense_operator(id), std::nullopt, std::vector<double>(3), {0.0, 10}), DomainError);
    const auto id4 = DenseMatrix::identity(4);
    EXPECT_THROW(cgs(dense_operator(id), dense_operator(id4), std::vector<double>(3)), DimensionError);
}

TEST(LinearOperator, ToeplitzActionIsLinearOnProbes)
{
    std::mt19937_64 rng(313);
    const auto t = oracle::random_dominant_toeplitz(rng, 50);
    const ToeplitzOperator op(t);
    const auto u = oracle::random_vector(rng, 50);
    const auto v = oracle::random_vector(rng, 50);
    std::vector<double> comb(50);
    for (std::size_t i = 0; i < 50; ++i) {
        comb[i] = 0.3 * u[i] + 2.0 * v[i];
    }
    const auto au = op.apply(u);
    const auto av = op.apply(v);
    const auto ac = op.apply(comb);
    for (std::size_t i = 0; i < 50; ++i) {
        EXPECT_NEAR(ac[i], 0.3 * au[i] + 2.0 * av[i], 1e-11 * oracle::max_abs(ac));
    }
}
