#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsfcde/scheme.hpp"

namespace tsfcde {

/// sqrt(h * sum v_i^2). Throws DomainError for h <= 0.
double discrete_l2(std::span<const double> v, double h);

struct ErrorReport {
    double l2_max_over_time = 0.0;  // max_n ||E^n||
    double max_norm = 0.0;          // max |E| over every mesh point
    std::vector<double> per_level_l2;
};

/// Errors against `exact` over levels 0..M. Boundary nodes carry zero error
/// by construction and are included in the max norm as such.
ErrorReport error_report(const SolutionHistory& hist, const std::function<double(double, double)>& exact,
                         const Grid& g);

/// log(coarse/fine)/log(ratio). Throws DomainError unless both errors are
/// positive and ratio > 1.
double convergence_order(double coarse_err, double fine_err, double ratio);

/// Constant coefficients d+ = 0.8, d- = 0.5, gamma = -0.1 on [0,1] x [0,1].
ProblemSpec example1(double alpha, double beta);

/// d+ = 9 sin t, d- = 4 sin t, gamma = -t on [0,1] x [0,1].
ProblemSpec example2(double alpha, double beta);

/// Constant-coefficient problem with f = 0 and phi = ((x-a)(b-x))^2.
ProblemSpec custom_constant(double alpha, double beta, double gamma, double dplus, double dminus, double a,
                            double b);

enum class RefinementMode {
    SpaceTime,  // ladder entries are N; M follows from tau = h
    TimeOnly,   // ladder entries are M; N stays fixed
};

struct ConvergenceRow {
    double alpha = 0.0;
    double beta = 0.0;
    double h = 0.0;
    double tau = 0.0;
    double l2_error = 0.0;
    std::optional<double> l2_order;
    double max_error = 0.0;
    std::optional<double> max_order;
};

struct LadderSpec {
    std::vector<int> ladder;  // ascending
    RefinementMode mode = RefinementMode::SpaceTime;
    int fixed_N = 1000;       // spatial resolution of a time-only study
    double a = 0.0;
    double b = 1.0;
    double T = 1.0;
};

/// The grid used for one ladder entry.
Grid ladder_grid(const LadderSpec& spec, int entry);

/// Runs every ladder entry and computes orders between consecutive rows
/// using the stated refinement ratio of h (space-time) or tau (time-only).
std::vector<ConvergenceRow> convergence_table(const ProblemSpec& p, const LadderSpec& spec,
                                              const SolverConfig& cfg);

struct IterationStats {
    std::size_t solves = 0;
    double mean = 0.0;
    int min = 0;
    int max = 0;
};

/// Statistics over every PCGS solve recorded in `hist`, setup solves included.
IterationStats iteration_stats(const SolutionHistory& hist);

struct BenchmarkRecord {
    int N = 0;
    int M = 0;
    double time_dense_s = 0.0;
    double time_fast_s = 0.0;
    double speedup = 0.0;
    IterationStats iterations;
};

/// Best-of-`repeats` wall-clock times of the dense reference path (LU with
/// factors reused for constant coefficients, history summed directly) and
/// the fast path (SolverKind::Auto unless cfg asks for PCGS, history by
/// convolution).
BenchmarkRecord benchmark(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg, int repeats = 3);

struct ExportedMatrices {
    DenseMatrix A;
    DenseMatrix PinvA;
};

/// Dense A at level j and P^{-1} A built column by column with the Strang
/// preconditioner.
ExportedMatrices level_matrices(const ProblemSpec& p, const Grid& g, int j);

/// Writes `<prefix>A.csv` and `<prefix>PinvA.csv`; returns the two paths.
std::vector<std::string> export_matrices(const ProblemSpec& p, const Grid& g, int j, const std::string& prefix);

}  // namespace tsfcde
