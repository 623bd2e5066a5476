#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tsfcde/analysis.hpp"
#include "tsfcde/dense.hpp"
#include "tsfcde/frac_coeffs.hpp"
#include "tsfcde/scheme.hpp"

namespace tsfcde::csv {

inline constexpr const char* kConvergenceHeader = "alpha,beta,h,tau,l2_error,l2_order,max_error,max_order";
inline constexpr const char* kBenchHeader = "N,M,time_dense_s,time_fast_s,speedup,iters_mean,iters_max";
inline constexpr const char* kWeightsHeader = "k,g,omega,a,b";

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

/// Strict parse of a whole cell; throws std::invalid_argument on garbage.
double parse_double(const std::string& cell);

std::vector<std::string> split_line(const std::string& line);

/// Header "x,u0,...,uM"; N+1 rows including the boundary zeros.
void write_history(std::ostream& os, const SolutionHistory& hist, const Grid& g);

/// Header "x,u"; the final level only.
void write_solution(std::ostream& os, const SolutionHistory& hist, const Grid& g);

/// Inverse of write_history: interior levels plus the x column.
struct ParsedHistory {
    std::vector<double> x;
    SolutionHistory hist;
};
ParsedHistory read_history(std::istream& is);

void write_matrix(std::ostream& os, const DenseMatrix& m);
DenseMatrix read_matrix(std::istream& is);

void write_residuals(std::ostream& os, const SolveReport& rep);

/// Rows k = 0..K; the a and b columns are left empty past the time weights.
void write_weights(std::ostream& os, const SpatialWeights& sw, const TimeWeights& tw, std::size_t K);

void write_convergence(std::ostream& os, const std::vector<ConvergenceRow>& rows);
std::vector<ConvergenceRow> read_convergence(std::istream& is);

void write_bench(std::ostream& os, const std::vector<BenchmarkRecord>& rows);

/// Writes through a temporary sibling file and renames on success, so that a
/// failure never leaves a partial file at `path`.
void write_file_atomic(const std::string& path, const std::function<void(std::ostream&)>& emit);

}  // namespace tsfcde::csv
