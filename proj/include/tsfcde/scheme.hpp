#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsfcde/fft.hpp"
#include "tsfcde/frac_coeffs.hpp"
#include "tsfcde/krylov.hpp"
#include "tsfcde/toeplitz.hpp"

namespace tsfcde {

/// Uniform space-time mesh: x_i = a + i h (i = 0..N), t_j = j tau (j = 0..M).
struct Grid {
    double a = 0.0;
    double b = 1.0;
    int N = 32;
    double T = 1.0;
    int M = 32;

    /// Throws DomainError unless N >= 5, M >= 1, a < b and T > 0.
    static Grid make(double a, double b, int N, double T, int M);

    double h() const noexcept { return (b - a) / N; }
    double tau() const noexcept { return T / M; }
    std::size_t interior() const noexcept { return static_cast<std::size_t>(N - 1); }
    double x(int i) const noexcept { return a + i * h(); }
    double t(double j) const noexcept { return j * tau(); }
};

/// Initial-boundary value problem with homogeneous Dirichlet boundaries.
struct ProblemSpec {
    std::string name;
    FractionalOrders orders;
    std::function<double(double)> gamma;   // convection gamma(t)
    std::function<double(double)> dplus;   // left-sided diffusion d+(t) >= 0
    std::function<double(double)> dminus;  // right-sided diffusion d-(t) >= 0
    std::function<double(double, double)> source;  // f(x, t)
    std::function<double(double)> initial;         // phi(x)
    std::function<double(double, double)> exact;   // optional u(x, t)
    bool constant_coefficients = false;

    bool has_exact() const { return static_cast<bool>(exact); }
};

/// Level-j Toeplitz pair: A u^{j+1} = B u^j - H + f with
/// A = eta_j I - sigma L and B = eta_j I + (1 - sigma) L, where
/// L = gamma/(2h) Q + D+/h^beta W + D-/h^beta W^T.
struct OperatorPair {
    Toeplitz A;
    Toeplitz B;
    double eta = 0.0;
    int level = 0;
};

/// The spatial operator L at level j as a Toeplitz matrix.
Toeplitz spatial_operator(const ProblemSpec& p, const Grid& g, const SpatialWeights& sw, double t);

/// Throws ProblemError when a sampled d+ or d- is negative.
OperatorPair assemble_pair(const ProblemSpec& p, const Grid& g, const SpatialWeights& sw,
                           const TimeWeights& tw, int j);

enum class LevelMethod { Pcgs, Gsf, Dense };

/// Interior values u^0..u^M (boundary zeros are not stored).
struct SolutionHistory {
    std::vector<std::vector<double>> levels;
    std::vector<SolveReport> reports;    // one per advanced level j = 0..M-1
    std::vector<LevelMethod> methods;    // how each level was advanced
    std::vector<SolveReport> setup_reports;  // A x = e_1, A y = e_n solves of the GSF path
    std::vector<std::string> notes;      // fallbacks and other diagnostics
};

/// H = tau^{-alpha}/Gamma(2-alpha) * sum_{s=0}^{j-1} c_{j-s} (u^{s+1} - u^s).
/// `c_row` is time_c_row(tw, j); the caller subtracts H on the right-hand side.
std::vector<double> history_term(const TimeWeights& tw, std::span<const double> c_row,
                                 const SolutionHistory& hist, int j);

/// Incremental evaluation of the history term for levels j = 1, 2, ...
///
/// The lags 1..j-1 of the sum use a fixed kernel c_m = a_m + b_{m+1} - b_m,
/// so that part is a causal convolution in time. It is evaluated exactly by
/// dyadic blocking: pairs inside one leaf of `leaf` levels are summed
/// directly, and each completed block of differences is convolved with the
/// kernel by FFT into an accumulator for the block that follows it. The
/// total cost is O(M N log^2 M) instead of O(M^2 N).
class HistoryAccumulator {
public:
    HistoryAccumulator(const TimeWeights& tw, std::size_t n, std::size_t leaf = 32);

    /// Number of differences u^{s+1} - u^s recorded so far.
    std::size_t pushed() const noexcept { return pushed_; }

    /// Records u^{s+1} - u^s for s = pushed().
    void push(std::span<const double> diff);

    /// H for level j; requires pushed() == j and j >= 1.
    void term(std::size_t j, std::span<double> out) const;
    std::vector<double> term(std::size_t j) const;

private:
    struct KernelSpectrum {
        std::size_t block = 0;
        std::shared_ptr<const FftPlan> plan;
        std::vector<Complex> spectrum;
    };

    const KernelSpectrum& kernel_for(std::size_t block);
    void cross(std::size_t end, std::size_t block);

    std::size_t n_ = 0;
    std::size_t leaf_ = 32;
    std::size_t pushed_ = 0;
    double scale_ = 1.0;
    std::vector<double> a_;
    std::vector<double> b_;
    std::vector<double> kernel_;  // kernel_[m] = c_m for m >= 1
    std::vector<double> first_;   // u^1 - u^0
    std::vector<std::vector<double>> diffs_;  // diffs_[i] = u^{i+2} - u^{i+1}
    std::vector<std::vector<double>> acc_;    // FFT contributions per target
    std::vector<KernelSpectrum> kernels_;
};

/// g = B u^j - H + f (H omitted at j = 0).
std::vector<double> rhs(const OperatorPair& pair, const SolutionHistory& hist,
                        std::optional<std::span<const double>> history, std::span<const double> f_vec);

/// f(x_i, t_{j+sigma}) at the interior nodes.
std::vector<double> sample_f(const ProblemSpec& p, const Grid& g, int j);

/// phi(x_i) at the interior nodes.
std::vector<double> sample_initial(const ProblemSpec& p, const Grid& g);

enum class SolverKind {
    Auto,   // Gohberg-Semencul path for constant coefficients, PCGS otherwise
    Pcgs,   // Strang-preconditioned CGS at every level
    Dense,  // dense LU (factors reused when the coefficients are constant)
};

enum class HistoryEvaluation {
    Convolution,  // HistoryAccumulator
    Direct,       // history_term at every level
};

struct SolverConfig {
    SolverKind kind = SolverKind::Auto;
    HistoryEvaluation history = HistoryEvaluation::Convolution;
    double tol = 1e-12;
    int maxit = 1000;
    /// A level whose PCGS solve stops short of `tol` (stagnation or maxit) is
    /// still accepted, with a note, when its true relative residual is at most
    /// this value; otherwise the run fails.
    double accept_residual = 1e-8;
};

/// Advances every level with its own operator pair.
SolutionHistory run_variable(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg);

/// Constant-coefficient driver: A^(sigma) at level 0, then one fixed A for
/// all later levels, inverted through the Gohberg-Semencul formula whose
/// generators come from two preconditioned CGS solves. Falls back to
/// per-level PCGS when the formula is inapplicable.
SolutionHistory run_constant(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg);

/// Picks run_constant or run_variable from p.constant_coefficients and cfg.kind.
SolutionHistory solve(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg);

}  // namespace tsfcde
