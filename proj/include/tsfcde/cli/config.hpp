#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsfcde/scheme.hpp"

namespace tsfcde::cli {

/// Invalid configuration value; `key()` names the offending field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct RunConfig {
    std::string problem = "example1";  // example1 | example2 | custom-constant
    double alpha = 0.5;
    double beta = 1.8;
    int N = 32;
    int M = 32;
    double T = 1.0;
    double a = 0.0;
    double b = 1.0;
    std::string solver = "auto";  // pcgs | dense | auto
    double tol = 1e-12;
    int maxit = 1000;
    std::string output;
    // custom-constant only
    double gamma = 0.0;
    double dplus = 1.0;
    double dminus = 1.0;
};

/// Field names accepted in config files and as flags.
const std::vector<std::string>& config_keys();

/// Parses "key = value" lines; blank lines and '#' comments are skipped.
/// Rejects unknown keys and malformed lines.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Sets one field from its textual value (no range validation).
void apply_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Throws ConfigError naming the first field that violates its constraint.
void validate(const RunConfig& cfg);

/// File values (if `path` is non-empty) overridden by `overrides`, then validated.
RunConfig parse_config(const std::string& path, const std::map<std::string, std::string>& overrides);

ProblemSpec make_problem(const RunConfig& cfg);
Grid make_grid(const RunConfig& cfg);
SolverConfig make_solver_config(const RunConfig& cfg);

}  // namespace tsfcde::cli
