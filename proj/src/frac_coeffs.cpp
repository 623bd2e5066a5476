#include "tsfcde/frac_coeffs.hpp"

#include <cmath>
#include <string>

#include "tsfcde/errors.hpp"

namespace tsfcde {

FractionalOrders FractionalOrders::make(double alpha, double beta)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (!(beta > 1.0 && beta <= 2.0)) {
        throw DomainError("beta must lie in (1, 2], got " + std::to_string(beta));
    }
    return FractionalOrders{alpha, beta, 1.0 - alpha / 2.0};
}

double gamma_fn(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("gamma_fn requires a finite positive argument, got " + std::to_string(x));
    }
    return std::tgamma(x);
}

std::vector<double> grunwald_g(double beta, std::size_t K)
{
    if (!(beta > 1.0 && beta <= 2.0)) {
        throw DomainError("beta must lie in (1, 2], got " + std::to_string(beta));
    }
    std::vector<double> g(K + 1);
    g[0] = 1.0;
    for (std::size_t k = 1; k <= K; ++k) {
        g[k] = (1.0 - (beta + 1.0) / static_cast<double>(k)) * g[k - 1];
    }
    return g;
}

SpatialWeights shifted_weights(double beta, std::size_t K)
{
    SpatialWeights sw;
    sw.beta = beta;
    sw.g = grunwald_g(beta, K);
    const double b2 = beta * beta;
    sw.lambda1 = (b2 + 3.0 * beta + 2.0) / 12.0;
    sw.lambda0 = (4.0 - b2) / 6.0;
    sw.lambdam1 = (b2 - 3.0 * beta + 2.0) / 12.0;

    sw.omega.resize(K + 1);
    sw.omega[0] = sw.lambda1 * sw.g[0];
    if (K >= 1) {
        sw.omega[1] = sw.lambda1 * sw.g[1] + sw.lambda0 * sw.g[0];
    }
    for (std::size_t k = 2; k <= K; ++k) {
        sw.omega[k] = sw.lambda1 * sw.g[k] + sw.lambda0 * sw.g[k - 1] + sw.lambdam1 * sw.g[k - 2];
    }
    return sw;
}

double TimeWeights::scale() const
{
    return std::pow(tau, -alpha) / gamma2ma;
}

TimeWeights time_ab(double alpha, std::size_t M, double tau)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (M < 1) {
        throw DomainError("time_ab requires M >= 1");
    }
    if (!(tau > 0.0)) {
        throw DomainError("time step tau must be positive");
    }

    TimeWeights tw;
    tw.alpha = alpha;
    tw.sigma = 1.0 - alpha / 2.0;
    tw.tau = tau;
    tw.gamma2ma = gamma_fn(2.0 - alpha);

    const double p1 = 1.0 - alpha;
    const double p2 = 2.0 - alpha;
    const double s = tw.sigma;
    tw.a.resize(M + 1);
    tw.b.assign(M + 1, 0.0);
    tw.a[0] = std::pow(s, p1);
    for (std::size_t l = 1; l <= M; ++l) {
        const double hi = static_cast<double>(l) + s;
        const double lo = hi - 1.0;
        const double hi1 = std::pow(hi, p1);
        const double lo1 = std::pow(lo, p1);
        tw.a[l] = hi1 - lo1;
        tw.b[l] = (std::pow(hi, p2) - std::pow(lo, p2)) / p2 - 0.5 * (hi1 + lo1);
    }
    return tw;
}

std::vector<double> time_c_row(const TimeWeights& tw, std::size_t j)
{
    if (tw.a.empty() || j + 1 > tw.max_level()) {
        throw DomainError("time_c_row level " + std::to_string(j) + " exceeds M - 1");
    }
    const auto& a = tw.a;
    const auto& b = tw.b;
    if (j == 0) {
        return {a[0]};
    }
    std::vector<double> c(j + 1);
    c[0] = a[0] + b[1];
    for (std::size_t m = 1; m < j; ++m) {
        c[m] = a[m] + b[m + 1] - b[m];
    }
    c[j] = a[j] - b[j];
    return c;
}

double eta(const TimeWeights& tw, std::size_t j)
{
    if (tw.a.empty() || j + 1 > tw.max_level()) {
        throw DomainError("eta level " + std::to_string(j) + " exceeds M - 1");
    }
    const double c0 = (j == 0) ? tw.a[0] : tw.a[0] + tw.b[1];
    return c0 / (std::pow(tw.tau, tw.alpha) * tw.gamma2ma);
}

}  // namespace tsfcde
