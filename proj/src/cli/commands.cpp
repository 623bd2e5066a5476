#include "tsfcde/cli/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "tsfcde/csv.hpp"
#include "tsfcde/errors.hpp"

namespace tsfcde::cli {

namespace {

std::string output_or(const RunConfig& cfg, const std::string& fallback)
{
    return cfg.output.empty() ? fallback : cfg.output;
}

const char* method_name(LevelMethod m)
{
    switch (m) {
    case LevelMethod::Pcgs:
        return "pcgs";
    case LevelMethod::Gsf:
        return "gsf";
    case LevelMethod::Dense:
        return "dense";
    }
    return "unknown";
}

std::string path_summary(const SolutionHistory& hist)
{
    std::map<std::string, int> counts;
    for (const auto m : hist.methods) {
        ++counts[method_name(m)];
    }
    std::string s;
    for (const auto& [name, count] : counts) {
        if (!s.empty()) {
            s += ' ';
        }
        s += name + ":" + std::to_string(count);
    }
    return s;
}

}  // namespace

std::vector<int> parse_ladder(const std::string& text)
{
    std::vector<int> ladder;
    for (const auto& cell : csv::split_line(text)) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != cell.size() || v <= 0) {
            throw ConfigError("ladder", "expected comma-separated positive integers, got '" + text + "'");
        }
        ladder.push_back(v);
    }
    for (std::size_t k = 1; k < ladder.size(); ++k) {
        if (ladder[k] <= ladder[k - 1]) {
            throw ConfigError("ladder", "entries must be strictly ascending");
        }
    }
    return ladder;
}

RefinementMode parse_mode(const std::string& text)
{
    if (text == "space-time") {
        return RefinementMode::SpaceTime;
    }
    if (text == "time-only") {
        return RefinementMode::TimeOnly;
    }
    throw ConfigError("mode", "expected space-time or time-only, got '" + text + "'");
}

int cmd_solve(const RunConfig& cfg, bool full_history, std::ostream& out, std::ostream& err)
{
    const ProblemSpec p = make_problem(cfg);
    const Grid g = make_grid(cfg);
    const SolverConfig sc = make_solver_config(cfg);

    const auto start = std::chrono::steady_clock::now();
    const SolutionHistory hist = solve(p, g, sc);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    const std::string path = output_or(cfg, "solution.csv");
    csv::write_file_atomic(path, [&](std::ostream& os) {
        if (full_history) {
            csv::write_history(os, hist, g);
        } else {
            csv::write_solution(os, hist, g);
        }
    });
    for (const auto& note : hist.notes) {
        err << "note: " << note << '\n';
    }

    const IterationStats st = iteration_stats(hist);
    out << "problem: " << p.name << '\n';
    out << "alpha: " << p.orders.alpha << "  beta: " << p.orders.beta << '\n';
    out << "N: " << g.N << "  M: " << g.M << "  T: " << g.T << '\n';
    out << "levels: " << hist.methods.size() << " (" << path_summary(hist) << ")\n";
    if (st.solves > 0) {
        out << "pcgs solves: " << st.solves << "  iterations mean " << st.mean << " min " << st.min << " max "
            << st.max << '\n';
    }
    if (p.has_exact()) {
        const ErrorReport rep = error_report(hist, p.exact, g);
        out << "l2 error (max over levels): " << rep.l2_max_over_time << '\n';
        out << "max error: " << rep.max_norm << '\n';
    }
    out << "elapsed_s: " << elapsed.count() << '\n';
    out << "output: " << path << '\n';
    return 0;
}

int cmd_convergence(const RunConfig& cfg, const std::vector<int>& ladder, RefinementMode mode, std::ostream& out,
                    std::ostream&)
{
    const ProblemSpec p = make_problem(cfg);
    if (!p.has_exact()) {
        throw ConfigError("problem", "convergence studies need a problem with a known exact solution");
    }
    LadderSpec spec;
    spec.ladder = ladder;
    spec.mode = mode;
    spec.fixed_N = cfg.N;
    spec.a = cfg.a;
    spec.b = cfg.b;
    spec.T = cfg.T;
    const auto rows = convergence_table(p, spec, make_solver_config(cfg));
    const std::string path = output_or(cfg, "convergence.csv");
    csv::write_file_atomic(path, [&](std::ostream& os) { csv::write_convergence(os, rows); });
    csv::write_convergence(out, rows);
    return 0;
}

int cmd_bench(const RunConfig& cfg, const std::vector<int>& ladder, int repeats, std::ostream& out,
              std::ostream&)
{
    const ProblemSpec p = make_problem(cfg);
    const SolverConfig sc = make_solver_config(cfg);
    std::vector<BenchmarkRecord> rows;
    for (int n : ladder) {
        const Grid g = Grid::make(cfg.a, cfg.b, n, cfg.T, n);
        rows.push_back(benchmark(p, g, sc, repeats));
    }
    const std::string path = output_or(cfg, "bench.csv");
    csv::write_file_atomic(path, [&](std::ostream& os) { csv::write_bench(os, rows); });
    csv::write_bench(out, rows);
    return 0;
}

int cmd_weights(double alpha, double beta, int K, const std::string& output, std::ostream& out, std::ostream&)
{
    if (K < 1) {
        throw ConfigError("K", "must be at least 1");
    }
    const FractionalOrders orders = FractionalOrders::make(alpha, beta);
    const auto ku = static_cast<std::size_t>(K);
    const SpatialWeights sw = shifted_weights(orders.beta, ku);
    const TimeWeights tw = time_ab(orders.alpha, ku, 1.0);
    const std::string path = output.empty() ? "weights.csv" : output;
    csv::write_file_atomic(path, [&](std::ostream& os) { csv::write_weights(os, sw, tw, ku); });
    out << "weights: K = " << K << " written to " << path << '\n';
    return 0;
}

int cmd_export(const RunConfig& cfg, int level, std::ostream& out, std::ostream&)
{
    const ProblemSpec p = make_problem(cfg);
    const Grid g = make_grid(cfg);
    if (level < 0 || level >= g.M) {
        throw ConfigError("level", "must satisfy 0 <= level < M");
    }
    for (const auto& path : export_matrices(p, g, level, output_or(cfg, "matrix_"))) {
        out << "wrote " << path << '\n';
    }
    return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Time-space fractional convection-diffusion solver"};
    app.require_subcommand(1);

    std::map<std::string, std::string> values;
    std::string config_path;
    const auto add_run_flags = [&](CLI::App* sub) {
        for (const auto& key : config_keys()) {
            sub->add_option("--" + key, values[key], "run configuration field '" + key + "'");
        }
        sub->add_option("--config", config_path, "flat key = value configuration file");
    };

    bool full_history = false;
    std::string ladder_text;
    std::string mode_text = "space-time";
    int repeats = 3;
    int level = 0;
    int K = 10;

    CLI::App* solve_cmd = app.add_subcommand("solve", "run one problem and write the solution");
    add_run_flags(solve_cmd);
    solve_cmd->add_flag("--full", full_history, "write every time level");

    CLI::App* conv_cmd = app.add_subcommand("convergence", "refinement study with error norms and orders");
    add_run_flags(conv_cmd);
    conv_cmd->add_option("--ladder", ladder_text, "comma-separated N (space-time) or M (time-only)")->required();
    conv_cmd->add_option("--mode", mode_text, "space-time or time-only");

    CLI::App* bench_cmd = app.add_subcommand("bench", "time the dense and fast solvers");
    add_run_flags(bench_cmd);
    bench_cmd->add_option("--ladder", ladder_text, "comma-separated N with M = N")->required();
    bench_cmd->add_option("--repeats", repeats, "best-of count");

    CLI::App* weights_cmd = app.add_subcommand("weights", "print the discretization weights");
    weights_cmd->add_option("--alpha", values["alpha"], "time order");
    weights_cmd->add_option("--beta", values["beta"], "space order");
    weights_cmd->add_option("--output", values["output"], "CSV path");
    weights_cmd->add_option("--K", K, "largest index");

    CLI::App* export_cmd = app.add_subcommand("export", "write A and the preconditioned matrix");
    add_run_flags(export_cmd);
    export_cmd->add_option("--level", level, "time level j");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream cli_out;
        std::ostringstream cli_err;
        const int code = app.exit(e, cli_out, cli_err);
        out << cli_out.str();
        err << cli_err.str();
        return code;
    }

    try {
        std::map<std::string, std::string> overrides;
        for (const auto& [key, value] : values) {
            if (!value.empty()) {
                overrides[key] = value;
            }
        }
        if (weights_cmd->parsed()) {
            RunConfig cfg = parse_config("", overrides);
            return cmd_weights(cfg.alpha, cfg.beta, K, cfg.output, out, err);
        }
        const RunConfig cfg = parse_config(config_path, overrides);
        if (solve_cmd->parsed()) {
            return cmd_solve(cfg, full_history, out, err);
        }
        if (conv_cmd->parsed()) {
            return cmd_convergence(cfg, parse_ladder(ladder_text), parse_mode(mode_text), out, err);
        }
        if (bench_cmd->parsed()) {
            if (repeats < 1) {
                throw ConfigError("repeats", "must be at least 1");
            }
            return cmd_bench(cfg, parse_ladder(ladder_text), repeats, out, err);
        }
        if (export_cmd->parsed()) {
            return cmd_export(cfg, level, out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

}  // namespace tsfcde::cli
