#include "tsfcde/krylov.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "tsfcde/errors.hpp"

namespace tsfcde {

namespace {

constexpr double kBreakdown = 1e-300;

double dot(std::span<const double> x, std::span<const double> y)
{
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm2(std::span<const double> x)
{
    return std::sqrt(dot(x, x));
}

bool all_finite(std::span<const double> x)
{
    for (double v : x) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

}  // namespace

CgsResult cgs(const LinearOperator& a, const std::optional<LinearOperator>& precond,
              std::span<const double> b, const CgsOptions& options, std::span<const double> x0)
{
    const std::size_t n = a.dimension;
    if (b.size() != n || (!x0.empty() && x0.size() != n)) {
        throw DimensionError("cgs: right-hand side or initial guess has the wrong length");
    }
    if (precond && precond->dimension != n) {
        throw DimensionError("cgs: preconditioner dimension mismatch");
    }
    if (!(options.tol > 0.0)) {
        throw DomainError("cgs: tolerance must be positive");
    }

    CgsResult result;
    auto& x = result.x;
    auto& rep = result.report;
    x.assign(n, 0.0);
    if (!x0.empty()) {
        x.assign(x0.begin(), x0.end());
    }

    std::vector<double> r(n), rt(n), u(n), p(n), q(n), vhat(n), phat(n), uhat(n), qhat(n), tmp(n);

    auto true_residual = [&](std::vector<double>& out) {
        a.apply(x, tmp);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = b[i] - tmp[i];
        }
    };
    auto precondition = [&](std::span<const double> in, std::span<double> out) {
        if (precond) {
            precond->apply(in, out);
        } else {
            std::copy(in.begin(), in.end(), out.begin());
        }
    };

    true_residual(r);
    const double r0norm = norm2(r);
    rep.residual_history.push_back(1.0);
    if (r0norm == 0.0) {
        rep.converged = true;
        rep.relative_residual = 0.0;
        return result;
    }
    rt = r;

    std::vector<double> best_x = x;
    double best_rel = 1.0;
    int best_it = 0;
    double stag_ref = 1.0;
    int stag_it = 0;

    double rho_prev = 0.0;
    for (int it = 1; it <= options.maxit; ++it) {
        const double rho = dot(rt, r);
        if (std::abs(rho) < kBreakdown) {
            throw BreakdownError("cgs breakdown: rho vanished at iteration " + std::to_string(it), it);
        }
        if (it == 1) {
            u = r;
            p = u;
        } else {
            const double beta = rho / rho_prev;
            for (std::size_t i = 0; i < n; ++i) {
                u[i] = r[i] + beta * q[i];
                p[i] = u[i] + beta * (q[i] + beta * p[i]);
            }
        }
        precondition(p, phat);
        a.apply(phat, vhat);
        const double sigma = dot(rt, vhat);
        if (std::abs(sigma) < kBreakdown) {
            throw BreakdownError("cgs breakdown: (r~, v) vanished at iteration " + std::to_string(it), it);
        }
        const double alpha = rho / sigma;
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = u[i] - alpha * vhat[i];
            tmp[i] = u[i] + q[i];
        }
        precondition(tmp, uhat);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * uhat[i];
        }
        a.apply(uhat, qhat);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] -= alpha * qhat[i];
        }
        rho_prev = rho;

        if (!all_finite(x) || !all_finite(r)) {
            throw DivergenceError("cgs diverged: non-finite iterate at iteration " + std::to_string(it), it);
        }

        double rel = norm2(r) / r0norm;
        rep.iterations = it;
        if (rel < options.tol) {
            // Confirm with the true residual; continue from it if drifted.
            true_residual(r);
            rel = norm2(r) / r0norm;
        }
        rep.residual_history.push_back(rel);
        rep.relative_residual = rel;
        if (rel < options.tol) {
            rep.converged = true;
            return result;
        }
        if (rel < best_rel) {
            best_rel = rel;
            best_it = it;
            best_x = x;
        }
        if (rel < 0.5 * stag_ref) {
            stag_ref = rel;
            stag_it = it;
        }
        if (options.stagnation_window > 0 && it - stag_it >= options.stagnation_window) {
            break;
        }
    }

    // Not converged: hand back the iterate with the smallest residual.
    rep.converged = false;
    if (best_it != rep.iterations) {
        x = best_x;
    }
    true_residual(r);
    rep.relative_residual = norm2(r) / r0norm;
    return result;
}

}  // namespace tsfcde
