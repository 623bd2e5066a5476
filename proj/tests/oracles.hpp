#pragma once

// Independent reference implementations used only by the tests. Each one
// follows the defining formula as literally as possible and ignores speed.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "tsfcde/dense.hpp"
#include "tsfcde/frac_coeffs.hpp"
#include "tsfcde/scheme.hpp"
#include "tsfcde/toeplitz.hpp"

namespace oracle {

using Complex = std::complex<double>;

/// O(n^2) DFT with the exponent reduced modulo n before the angle is formed.
inline std::vector<Complex> naive_dft(std::span<const Complex> x, bool inverse)
{
    const std::size_t n = x.size();
    std::vector<Complex> out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        Complex s(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t e = (j * k) % n;
            const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n);
            s += x[j] * Complex(std::cos(ang), std::sin(ang));
        }
        out[k] = inverse ? s / static_cast<double>(n) : s;
    }
    return out;
}

inline std::vector<double> dense_matvec(const tsfcde::DenseMatrix& a, std::span<const double> v)
{
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        long double s = 0.0L;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += static_cast<long double>(a(i, j)) * v[j];
        }
        out[i] = static_cast<double>(s);
    }
    return out;
}

/// Entry-by-entry expansion of a Toeplitz generator pair.
inline tsfcde::DenseMatrix expand(const std::vector<double>& col, const std::vector<double>& row)
{
    const std::size_t n = col.size();
    tsfcde::DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = i >= j ? col[i - j] : row[j - i];
        }
    }
    return m;
}

inline tsfcde::DenseMatrix dense_circulant(std::span<const double> c)
{
    const std::size_t n = c.size();
    tsfcde::DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = c[(i + n - j) % n];
        }
    }
    return m;
}

/// (-1)^k binom(beta, k) = prod_{m=1}^{k} (m - 1 - beta) / m in long double.
inline double binomial_g(double beta, std::size_t k)
{
    long double g = 1.0L;
    const long double b = beta;
    for (std::size_t m = 1; m <= k; ++m) {
        g *= (static_cast<long double>(m) - 1.0L - b) / static_cast<long double>(m);
    }
    return static_cast<double>(g);
}

/// Dense W with W[i][j] = omega_{i-j+1} (zero when the index is negative).
inline tsfcde::DenseMatrix dense_w(const std::vector<double>& omega, std::size_t n)
{
    tsfcde::DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const long k = static_cast<long>(i) - static_cast<long>(j) + 1;
            m(i, j) = k >= 0 ? omega[static_cast<std::size_t>(k)] : 0.0;
        }
    }
    return m;
}

/// A = eta I - sigma L and B = eta I + (1 - sigma) L assembled entry by entry
/// from Q, W and W^T.
struct DensePair {
    tsfcde::DenseMatrix A;
    tsfcde::DenseMatrix B;
};

inline DensePair dense_pair(const tsfcde::ProblemSpec& p, const tsfcde::Grid& g, int j)
{
    const std::size_t n = g.interior();
    const double alpha = p.orders.alpha;
    const double beta = p.orders.beta;
    const double sigma = 1.0 - alpha / 2.0;
    const double tau = g.tau();
    const double t = (j + sigma) * tau;
    const double h = g.h();

    // Weights straight from the binomial definitions.
    std::vector<double> gk(n + 2);
    for (std::size_t k = 0; k < gk.size(); ++k) {
        gk[k] = binomial_g(beta, k);
    }
    const double l1 = (beta * beta + 3 * beta + 2) / 12.0;
    const double l0 = (4 - beta * beta) / 6.0;
    const double lm1 = (beta * beta - 3 * beta + 2) / 12.0;
    std::vector<double> omega(n + 2);
    for (std::size_t k = 0; k < omega.size(); ++k) {
        omega[k] = l1 * gk[k] + (k >= 1 ? l0 * gk[k - 1] : 0.0) + (k >= 2 ? lm1 * gk[k - 2] : 0.0);
    }
    const auto w = dense_w(omega, n);

    const double a0 = std::pow(sigma, 1.0 - alpha);
    const double b1 = (std::pow(1.0 + sigma, 2.0 - alpha) - std::pow(sigma, 2.0 - alpha)) / (2.0 - alpha)
        - 0.5 * (std::pow(1.0 + sigma, 1.0 - alpha) + std::pow(sigma, 1.0 - alpha));
    const double c0 = j == 0 ? a0 : a0 + b1;
    const double eta = c0 / (std::pow(tau, alpha) * std::tgamma(2.0 - alpha));

    const double conv = p.gamma(t) / (2.0 * h);
    const double cp = p.dplus(t) / std::pow(h, beta);
    const double cm = p.dminus(t) / std::pow(h, beta);
    DensePair out{tsfcde::DenseMatrix(n, n), tsfcde::DenseMatrix(n, n)};
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            double q = 0.0;
            if (c == r + 1) {
                q = 1.0;
            } else if (r == c + 1) {
                q = -1.0;
            }
            const double l = conv * q + cp * w(r, c) + cm * w(c, r);
            const double id = r == c ? eta : 0.0;
            out.A(r, c) = id - sigma * l;
            out.B(r, c) = id + (1.0 - sigma) * l;
        }
    }
    return out;
}

/// c row of level j straight from the three-branch definition.
inline std::vector<double> c_row(double alpha, std::size_t j)
{
    const double s = 1.0 - alpha / 2.0;
    const auto a = [&](std::size_t l) {
        if (l == 0) {
            return std::pow(s, 1.0 - alpha);
        }
        return std::pow(l + s, 1.0 - alpha) - std::pow(l - 1.0 + s, 1.0 - alpha);
    };
    const auto b = [&](std::size_t l) {
        return (std::pow(l + s, 2.0 - alpha) - std::pow(l - 1.0 + s, 2.0 - alpha)) / (2.0 - alpha)
            - 0.5 * (std::pow(l + s, 1.0 - alpha) + std::pow(l - 1.0 + s, 1.0 - alpha));
    };
    if (j == 0) {
        return {a(0)};
    }
    std::vector<double> c(j + 1);
    c[0] = a(0) + b(1);
    for (std::size_t m = 1; m < j; ++m) {
        c[m] = a(m) + b(m + 1) - b(m);
    }
    c[j] = a(j) - b(j);
    return c;
}

/// tau^{-alpha}/Gamma(2-alpha) sum_{s=0}^{j-1} c_{j-s} (u^{s+1} - u^s), summed in
/// the order written.
inline std::vector<double> history_sum(double alpha, double tau, const std::vector<std::vector<double>>& u,
                                       std::size_t j)
{
    const auto c = c_row(alpha, j);
    const std::size_t n = u[0].size();
    std::vector<long double> acc(n, 0.0L);
    for (std::size_t s = 0; s < j; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            acc[i] += static_cast<long double>(c[j - s]) * (static_cast<long double>(u[s + 1][i]) - u[s][i]);
        }
    }
    const double scale = std::pow(tau, -alpha) / std::tgamma(2.0 - alpha);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<double>(acc[i] * scale);
    }
    return out;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = d(rng);
    }
    return v;
}

/// Random Toeplitz with a dominant diagonal.
inline tsfcde::Toeplitz random_dominant_toeplitz(std::mt19937_64& rng, std::size_t n)
{
    auto col = random_vector(rng, n);
    auto row = random_vector(rng, n);
    double off = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        col[k] /= static_cast<double>(k * k);
        row[k] /= static_cast<double>(k * k);
        off += std::abs(col[k]) + std::abs(row[k]);
    }
    col[0] = row[0] = 1.0 + 2.0 * off;
    return tsfcde::Toeplitz{col, row};
}

inline double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

inline double norm2(std::span<const double> v)
{
    long double s = 0.0L;
    for (double x : v) {
        s += static_cast<long double>(x) * x;
    }
    return static_cast<double>(std::sqrt(s));
}

}  // namespace oracle
