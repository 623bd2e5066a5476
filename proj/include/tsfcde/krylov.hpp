#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace tsfcde {

/// Matrix-free linear map y = A x on R^dimension.
struct LinearOperator {
    std::size_t dimension = 0;
    std::function<void(std::span<const double> x, std::span<double> y)> apply;
};

struct SolveReport {
    int iterations = 0;
    double relative_residual = 0.0;        // ||b - A x||_2 / ||b - A x0||_2
    std::vector<double> residual_history;  // entry k is the ratio after k iterations
    bool converged = false;
};

struct CgsOptions {
    double tol = 1e-12;
    int maxit = 1000;
    /// Stop early once the residual has failed to halve for this many
    /// consecutive iterations (0 disables the test).
    int stagnation_window = 25;
};

struct CgsResult {
    std::vector<double> x;
    SolveReport report;
};

/// Preconditioned conjugate gradient squared.
///
/// `precond`, when given, applies M^{-1}. Iterates follow the standard
/// preconditioned CGS recurrences, in which the residual r is the residual of
/// the original system, so the stopping test is on ||b - A x|| / ||r0||. A
/// recursive residual that meets the tolerance is confirmed against the true
/// residual before returning. Without convergence the iterate with the
/// smallest residual is returned and the report carries its true residual.
///
/// Throws BreakdownError when rho or (r~, v^) falls below 1e-300 in
/// magnitude and DivergenceError when the iterates stop being finite.
CgsResult cgs(const LinearOperator& a, const std::optional<LinearOperator>& precond,
              std::span<const double> b, const CgsOptions& options = {},
              std::span<const double> x0 = {});

}  // namespace tsfcde
