#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tsfcde/analysis.hpp"
#include "tsfcde/cli/config.hpp"

namespace tsfcde::cli {

/// Runs the configured problem, writes the solution CSV to cfg.output
/// (default "solution.csv", all levels when `full_history`) and prints a
/// summary to `out`.
int cmd_solve(const RunConfig& cfg, bool full_history, std::ostream& out, std::ostream& err);

/// Writes the convergence CSV. Ladder entries are N (space-time) or M
/// (time-only, with cfg.N fixed).
int cmd_convergence(const RunConfig& cfg, const std::vector<int>& ladder, RefinementMode mode, std::ostream& out,
                    std::ostream& err);

/// Writes the timing CSV; each ladder entry N runs with M = N.
int cmd_bench(const RunConfig& cfg, const std::vector<int>& ladder, int repeats, std::ostream& out,
              std::ostream& err);

int cmd_weights(double alpha, double beta, int K, const std::string& output, std::ostream& out,
                std::ostream& err);

/// Writes `<output>A.csv` and `<output>PinvA.csv` for the given level.
int cmd_export(const RunConfig& cfg, int level, std::ostream& out, std::ostream& err);

/// Parses comma-separated positive integers, e.g. "32,64,128".
std::vector<int> parse_ladder(const std::string& text);

RefinementMode parse_mode(const std::string& text);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsfcde::cli
