#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsfcde {

/// Time order alpha in (0, 1], space order beta in (1, 2] and the
/// evaluation offset sigma = 1 - alpha/2 of the time discretization.
struct FractionalOrders {
    double alpha = 0.5;
    double beta = 1.8;
    double sigma = 0.75;

    /// Validates the ranges and derives sigma. Throws DomainError.
    static FractionalOrders make(double alpha, double beta);
};

/// Gamma function for x > 0, relative accuracy better than 1e-12.
double gamma_fn(double x);

/// Grunwald coefficients g_k = (-1)^k binom(beta, k) for k = 0..K,
/// generated by the recurrence g_k = (1 - (beta + 1)/k) g_{k-1}.
std::vector<double> grunwald_g(double beta, std::size_t K);

/// Weighted shifted Grunwald weights (second-order accurate in space).
struct SpatialWeights {
    double beta = 0.0;
    double lambda1 = 0.0;
    double lambda0 = 0.0;
    double lambdam1 = 0.0;
    std::vector<double> g;
    std::vector<double> omega;
};

/// omega_0 = l1 g_0, omega_1 = l1 g_1 + l0 g_0,
/// omega_k = l1 g_k + l0 g_{k-1} + l-1 g_{k-2} for k >= 2.
SpatialWeights shifted_weights(double beta, std::size_t K);

/// Coefficients a_l, b_l of the Caputo derivative approximation at
/// t_{j+sigma}. b[0] is unused and stored as zero.
struct TimeWeights {
    double alpha = 0.0;
    double sigma = 0.0;
    double tau = 0.0;
    double gamma2ma = 1.0;  // Gamma(2 - alpha)
    std::vector<double> a;
    std::vector<double> b;

    std::size_t max_level() const noexcept { return a.empty() ? 0 : a.size() - 1; }

    /// tau^{-alpha} / Gamma(2 - alpha), the common prefactor of every c_m.
    double scale() const;
};

TimeWeights time_ab(double alpha, std::size_t M, double tau);

/// c_0..c_j for level j (0 <= j <= M - 1).
std::vector<double> time_c_row(const TimeWeights& tw, std::size_t j);

/// Diagonal shift eta_j = c_0^{(j)} / (tau^alpha Gamma(2 - alpha)).
/// Constant for every j >= 1.
double eta(const TimeWeights& tw, std::size_t j);

}  // namespace tsfcde
