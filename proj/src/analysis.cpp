#include "tsfcde/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "tsfcde/csv.hpp"
#include "tsfcde/errors.hpp"

namespace tsfcde {

double discrete_l2(std::span<const double> v, double h)
{
    if (!(h > 0.0)) {
        throw DomainError("discrete_l2 requires h > 0");
    }
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(h * s);
}

ErrorReport error_report(const SolutionHistory& hist, const std::function<double(double, double)>& exact,
                         const Grid& g)
{
    if (!exact) {
        throw ProblemError("error_report requires an exact solution");
    }
    if (hist.levels.empty()) {
        throw DimensionError("error_report requires at least the initial level");
    }
    ErrorReport rep;
    rep.per_level_l2.reserve(hist.levels.size());
    const double h = g.h();
    std::vector<double> e(g.interior());
    for (std::size_t j = 0; j < hist.levels.size(); ++j) {
        const auto& u = hist.levels[j];
        if (u.size() != e.size()) {
            throw DimensionError("solution level does not match the grid");
        }
        const double t = g.t(static_cast<double>(j));
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = exact(g.x(static_cast<int>(i) + 1), t) - u[i];
            rep.max_norm = std::max(rep.max_norm, std::abs(e[i]));
        }
        const double l2 = discrete_l2(e, h);
        rep.per_level_l2.push_back(l2);
        rep.l2_max_over_time = std::max(rep.l2_max_over_time, l2);
    }
    return rep;
}

double convergence_order(double coarse_err, double fine_err, double ratio)
{
    if (!(coarse_err > 0.0) || !(fine_err > 0.0)) {
        throw DomainError("convergence_order requires positive errors");
    }
    if (!(ratio > 1.0)) {
        throw DomainError("convergence_order requires a refinement ratio > 1");
    }
    return std::log(coarse_err / fine_err) / std::log(ratio);
}

namespace {

double poly_profile(double x)
{
    return x * x * (1.0 - x) * (1.0 - x);
}

// Riemann-Liouville derivatives of x^2(1-x)^2 from both sides, weighted by
// the diffusion coefficients.
struct FractionalProfile {
    double beta = 2.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;

    explicit FractionalProfile(double b)
        : beta(b),
          c2(gamma_fn(3.0) / gamma_fn(3.0 - b)),
          c3(2.0 * gamma_fn(4.0) / gamma_fn(4.0 - b)),
          c4(gamma_fn(5.0) / gamma_fn(5.0 - b))
    {
    }

    double side(double z) const
    {
        const double zp = std::pow(z, 2.0 - beta);
        return zp * (c2 - c3 * z + c4 * z * z);
    }

    double operator()(double x, double dp, double dm) const { return dp * side(x) + dm * side(1.0 - x); }
};

ProblemSpec manufactured(std::string name, double alpha, double beta)
{
    ProblemSpec p;
    p.name = std::move(name);
    p.orders = FractionalOrders::make(alpha, beta);
    p.initial = poly_profile;
    p.exact = [alpha](double x, double t) { return (std::pow(t, 2.0 + alpha) + 1.0) * poly_profile(x); };
    return p;
}

}  // namespace

ProblemSpec example1(double alpha, double beta)
{
    ProblemSpec p = manufactured("example1", alpha, beta);
    constexpr double gam = -0.1;
    constexpr double dp = 0.8;
    constexpr double dm = 0.5;
    p.gamma = [](double) { return gam; };
    p.dplus = [](double) { return dp; };
    p.dminus = [](double) { return dm; };
    p.constant_coefficients = true;
    const double time_coef = gamma_fn(3.0 + alpha) / 2.0;
    const FractionalProfile frac(beta);
    p.source = [alpha, frac, time_coef](double x, double t) {
        const double conv = 2.0 * gam * x * (1.0 - x) * (1.0 - 2.0 * x);
        return time_coef * poly_profile(x) * t * t
            - (std::pow(t, 2.0 + alpha) + 1.0) * (conv + frac(x, dp, dm));
    };
    return p;
}

ProblemSpec example2(double alpha, double beta)
{
    ProblemSpec p = manufactured("example2", alpha, beta);
    p.gamma = [](double t) { return -t; };
    p.dplus = [](double t) { return 9.0 * std::sin(t); };
    p.dminus = [](double t) { return 4.0 * std::sin(t); };
    p.constant_coefficients = false;
    const double time_coef = gamma_fn(3.0 + alpha) / 2.0;
    const FractionalProfile frac(beta);
    p.source = [alpha, frac, time_coef](double x, double t) {
        const double conv = -2.0 * t * x * (1.0 - x) * (1.0 - 2.0 * x);
        const double s = std::sin(t);
        return time_coef * poly_profile(x) * t * t
            - (std::pow(t, 2.0 + alpha) + 1.0) * (conv + frac(x, 9.0 * s, 4.0 * s));
    };
    return p;
}

ProblemSpec custom_constant(double alpha, double beta, double gamma, double dplus, double dminus, double a,
                            double b)
{
    if (dplus < 0.0 || dminus < 0.0) {
        throw ProblemError("diffusion coefficients must be non-negative");
    }
    if (!(a < b)) {
        throw DomainError("space interval requires a < b");
    }
    ProblemSpec p;
    p.name = "custom-constant";
    p.orders = FractionalOrders::make(alpha, beta);
    p.gamma = [gamma](double) { return gamma; };
    p.dplus = [dplus](double) { return dplus; };
    p.dminus = [dminus](double) { return dminus; };
    p.source = [](double, double) { return 0.0; };
    p.initial = [a, b](double x) {
        const double w = (x - a) * (b - x);
        return w * w;
    };
    p.constant_coefficients = true;
    return p;
}

Grid ladder_grid(const LadderSpec& spec, int entry)
{
    if (spec.mode == RefinementMode::SpaceTime) {
        const double steps = entry * spec.T / (spec.b - spec.a);
        const int M = std::max(1, static_cast<int>(std::lround(steps)));
        return Grid::make(spec.a, spec.b, entry, spec.T, M);
    }
    return Grid::make(spec.a, spec.b, spec.fixed_N, spec.T, entry);
}

std::vector<ConvergenceRow> convergence_table(const ProblemSpec& p, const LadderSpec& spec,
                                              const SolverConfig& cfg)
{
    if (spec.ladder.empty()) {
        throw DomainError("convergence ladder is empty");
    }
    if (!std::is_sorted(spec.ladder.begin(), spec.ladder.end())
        || std::adjacent_find(spec.ladder.begin(), spec.ladder.end()) != spec.ladder.end()) {
        throw DomainError("convergence ladder must be strictly ascending");
    }
    std::vector<ConvergenceRow> rows;
    for (int entry : spec.ladder) {
        const Grid g = ladder_grid(spec, entry);
        const SolutionHistory hist = solve(p, g, cfg);
        const ErrorReport rep = error_report(hist, p.exact, g);
        ConvergenceRow row;
        row.alpha = p.orders.alpha;
        row.beta = p.orders.beta;
        row.h = g.h();
        row.tau = g.tau();
        row.l2_error = rep.l2_max_over_time;
        row.max_error = rep.max_norm;
        if (!rows.empty()) {
            const ConvergenceRow& prev = rows.back();
            const double ratio = spec.mode == RefinementMode::SpaceTime ? prev.h / row.h : prev.tau / row.tau;
            row.l2_order = convergence_order(prev.l2_error, row.l2_error, ratio);
            row.max_order = convergence_order(prev.max_error, row.max_error, ratio);
        }
        rows.push_back(row);
    }
    return rows;
}

IterationStats iteration_stats(const SolutionHistory& hist)
{
    IterationStats st;
    st.min = std::numeric_limits<int>::max();
    long total = 0;
    const auto add = [&](const SolveReport& r) {
        ++st.solves;
        total += r.iterations;
        st.min = std::min(st.min, r.iterations);
        st.max = std::max(st.max, r.iterations);
    };
    for (const auto& r : hist.setup_reports) {
        add(r);
    }
    for (std::size_t j = 0; j < hist.reports.size() && j < hist.methods.size(); ++j) {
        if (hist.methods[j] == LevelMethod::Pcgs) {
            add(hist.reports[j]);
        }
    }
    if (st.solves == 0) {
        st.min = 0;
        return st;
    }
    st.mean = static_cast<double>(total) / static_cast<double>(st.solves);
    return st;
}

BenchmarkRecord benchmark(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg, int repeats)
{
    if (repeats < 1) {
        throw DomainError("benchmark needs at least one repeat");
    }
    using clock = std::chrono::steady_clock;
    const auto best_of = [&](SolverKind kind, HistoryEvaluation history, SolutionHistory* keep) {
        SolverConfig c = cfg;
        c.kind = kind;
        c.history = history;
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < repeats; ++r) {
            const auto start = clock::now();
            SolutionHistory hist = solve(p, g, c);
            const std::chrono::duration<double> dt = clock::now() - start;
            best = std::min(best, dt.count());
            if (keep != nullptr && r == 0) {
                *keep = std::move(hist);
            }
        }
        return best;
    };

    BenchmarkRecord rec;
    rec.N = g.N;
    rec.M = g.M;
    SolutionHistory fast;
    const SolverKind fast_kind = cfg.kind == SolverKind::Dense ? SolverKind::Auto : cfg.kind;
    rec.time_fast_s = best_of(fast_kind, HistoryEvaluation::Convolution, &fast);
    rec.time_dense_s = best_of(SolverKind::Dense, HistoryEvaluation::Direct, nullptr);
    rec.speedup = rec.time_fast_s > 0.0 ? rec.time_dense_s / rec.time_fast_s
                                        : std::numeric_limits<double>::infinity();
    rec.iterations = iteration_stats(fast);
    return rec;
}

ExportedMatrices level_matrices(const ProblemSpec& p, const Grid& g, int j)
{
    if (j < 0 || j >= g.M) {
        throw DomainError("export level must satisfy 0 <= level < M");
    }
    const auto sw = shifted_weights(p.orders.beta, static_cast<std::size_t>(g.N));
    const auto tw = time_ab(p.orders.alpha, static_cast<std::size_t>(g.M), g.tau());
    const OperatorPair pair = assemble_pair(p, g, sw, tw, j);
    ExportedMatrices out;
    out.A = pair.A.dense();
    const CirculantOperator pre = strang(pair.A);
    const std::size_t n = pair.A.size();
    out.PinvA = DenseMatrix(n, n);
    std::vector<double> column(n);
    std::vector<double> solved(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            column[r] = out.A(r, c);
        }
        pre.solve(column, solved);
        for (std::size_t r = 0; r < n; ++r) {
            out.PinvA(r, c) = solved[r];
        }
    }
    return out;
}

std::vector<std::string> export_matrices(const ProblemSpec& p, const Grid& g, int j, const std::string& prefix)
{
    const ExportedMatrices m = level_matrices(p, g, j);
    const std::string a_path = prefix + "A.csv";
    const std::string pa_path = prefix + "PinvA.csv";
    csv::write_file_atomic(a_path, [&](std::ostream& os) { csv::write_matrix(os, m.A); });
    csv::write_file_atomic(pa_path, [&](std::ostream& os) { csv::write_matrix(os, m.PinvA); });
    return {a_path, pa_path};
}

}  // namespace tsfcde
