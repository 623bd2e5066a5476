#include "tsfcde/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tsfcde/analysis.hpp"

namespace tsfcde::cli {

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {"problem", "alpha",  "beta",  "N",      "M",
                                                  "T",       "a",      "b",     "solver", "tol",
                                                  "maxit",   "output", "gamma", "dplus",  "dminus"};
    return keys;
}

namespace {

std::string trim(const std::string& s)
{
    const auto first = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
    const auto last = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); });
    if (first >= last.base()) {
        return {};
    }
    return std::string(first, last.base());
}

bool known_key(const std::string& key)
{
    const auto& keys = config_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

double to_real(const std::string& key, const std::string& value)
{
    double v = 0.0;
    const char* first = value.data();
    const char* last = first + value.size();
    const auto res = std::from_chars(first, last, v);
    if (value.empty() || res.ec != std::errc() || res.ptr != last) {
        throw ConfigError(key, "expected a real number, got '" + value + "'");
    }
    return v;
}

int to_count(const std::string& key, const std::string& value)
{
    int v = 0;
    const char* first = value.data();
    const char* last = first + value.size();
    const auto res = std::from_chars(first, last, v);
    if (value.empty() || res.ec != std::errc() || res.ptr != last) {
        throw ConfigError(key, "expected an integer, got '" + value + "'");
    }
    return v;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_key(key)) {
            throw ConfigError(key, "unknown configuration key");
        }
        kv[key] = value;
    }
    return kv;
}

void apply_value(RunConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "problem") {
        cfg.problem = value;
    } else if (key == "alpha") {
        cfg.alpha = to_real(key, value);
    } else if (key == "beta") {
        cfg.beta = to_real(key, value);
    } else if (key == "N") {
        cfg.N = to_count(key, value);
    } else if (key == "M") {
        cfg.M = to_count(key, value);
    } else if (key == "T") {
        cfg.T = to_real(key, value);
    } else if (key == "a") {
        cfg.a = to_real(key, value);
    } else if (key == "b") {
        cfg.b = to_real(key, value);
    } else if (key == "solver") {
        cfg.solver = value;
    } else if (key == "tol") {
        cfg.tol = to_real(key, value);
    } else if (key == "maxit") {
        cfg.maxit = to_count(key, value);
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "gamma") {
        cfg.gamma = to_real(key, value);
    } else if (key == "dplus") {
        cfg.dplus = to_real(key, value);
    } else if (key == "dminus") {
        cfg.dminus = to_real(key, value);
    } else {
        throw ConfigError(key, "unknown configuration key");
    }
}

void validate(const RunConfig& cfg)
{
    if (cfg.problem != "example1" && cfg.problem != "example2" && cfg.problem != "custom-constant") {
        throw ConfigError("problem", "unknown problem '" + cfg.problem
                                         + "' (expected example1, example2 or custom-constant)");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
        throw ConfigError("alpha", "must lie in (0, 1]");
    }
    if (!(cfg.beta > 1.0 && cfg.beta <= 2.0)) {
        throw ConfigError("beta", "must lie in (1, 2]");
    }
    if (cfg.N < 5) {
        throw ConfigError("N", "must satisfy N >= 5");
    }
    if (cfg.M < 1) {
        throw ConfigError("M", "must satisfy M >= 1");
    }
    if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) {
        throw ConfigError("T", "must be positive");
    }
    if (!(cfg.a < cfg.b) || !std::isfinite(cfg.a) || !std::isfinite(cfg.b)) {
        throw ConfigError("b", "space interval requires a < b");
    }
    if (cfg.problem != "custom-constant" && (cfg.a != 0.0 || cfg.b != 1.0)) {
        throw ConfigError(cfg.a != 0.0 ? "a" : "b", "the example problems are posed on [0, 1]");
    }
    if (cfg.solver != "auto" && cfg.solver != "pcgs" && cfg.solver != "dense") {
        throw ConfigError("solver", "unknown solver '" + cfg.solver + "' (expected auto, pcgs or dense)");
    }
    if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) {
        throw ConfigError("tol", "must lie in (0, 1)");
    }
    if (cfg.maxit < 1) {
        throw ConfigError("maxit", "must be at least 1");
    }
    if (cfg.dplus < 0.0 || !std::isfinite(cfg.dplus)) {
        throw ConfigError("dplus", "must be non-negative");
    }
    if (cfg.dminus < 0.0 || !std::isfinite(cfg.dminus)) {
        throw ConfigError("dminus", "must be non-negative");
    }
    if (!std::isfinite(cfg.gamma)) {
        throw ConfigError("gamma", "must be finite");
    }
}

RunConfig parse_config(const std::string& path, const std::map<std::string, std::string>& overrides)
{
    RunConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("config", "cannot read '" + path + "'");
        }
        std::ostringstream text;
        text << in.rdbuf();
        for (const auto& [key, value] : parse_key_values(text.str())) {
            apply_value(cfg, key, value);
        }
    }
    for (const auto& [key, value] : overrides) {
        if (!known_key(key)) {
            throw ConfigError(key, "unknown configuration key");
        }
        apply_value(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

ProblemSpec make_problem(const RunConfig& cfg)
{
    if (cfg.problem == "example1") {
        return example1(cfg.alpha, cfg.beta);
    }
    if (cfg.problem == "example2") {
        return example2(cfg.alpha, cfg.beta);
    }
    if (cfg.problem == "custom-constant") {
        return custom_constant(cfg.alpha, cfg.beta, cfg.gamma, cfg.dplus, cfg.dminus, cfg.a, cfg.b);
    }
    throw ConfigError("problem", "unknown problem '" + cfg.problem + "'");
}

Grid make_grid(const RunConfig& cfg)
{
    return Grid::make(cfg.a, cfg.b, cfg.N, cfg.T, cfg.M);
}

SolverConfig make_solver_config(const RunConfig& cfg)
{
    SolverConfig s;
    s.tol = cfg.tol;
    s.maxit = cfg.maxit;
    if (cfg.solver == "pcgs") {
        s.kind = SolverKind::Pcgs;
    } else if (cfg.solver == "dense") {
        s.kind = SolverKind::Dense;
    } else {
        s.kind = SolverKind::Auto;
    }
    return s;
}

}  // namespace tsfcde::cli
