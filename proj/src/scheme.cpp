#include "tsfcde/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "tsfcde/dense.hpp"
#include "tsfcde/errors.hpp"

namespace tsfcde {

Grid Grid::make(double a, double b, int N, double T, int M)
{
    if (N < 5) {
        throw DomainError("N must satisfy N >= 5, got " + std::to_string(N));
    }
    if (M < 1) {
        throw DomainError("M must satisfy M >= 1, got " + std::to_string(M));
    }
    if (!(a < b)) {
        throw DomainError("space interval requires a < b");
    }
    if (!(T > 0.0)) {
        throw DomainError("final time T must be positive");
    }
    return Grid{a, b, N, T, M};
}

Toeplitz spatial_operator(const ProblemSpec& p, const Grid& g, const SpatialWeights& sw, double t)
{
    const std::size_t n = g.interior();
    if (sw.omega.size() < n + 1) {
        throw DimensionError("spatial weights must cover omega_0..omega_{N-1}");
    }
    const double gam = p.gamma(t);
    const double dp = p.dplus(t);
    const double dm = p.dminus(t);
    if (dp < 0.0 || dm < 0.0 || !std::isfinite(dp) || !std::isfinite(dm)) {
        std::ostringstream msg;
        msg << "diffusion coefficients must be non-negative: d+(" << t << ") = " << dp
            << ", d-(" << t << ") = " << dm;
        throw ProblemError(msg.str());
    }
    const double h = g.h();
    const double conv = gam / (2.0 * h);
    const double scale = std::pow(h, -p.orders.beta);
    const double cp = dp * scale;
    const double cm = dm * scale;
    const auto& w = sw.omega;

    // (W v)_i = sum_k w_k v_{i-k+1}: W[i][j] = w_{i-j+1}, so W has w_1 on the
    // diagonal, w_0 above it and w_2, w_3, ... below. Q has -1 below, +1 above.
    std::vector<double> col(n, 0.0);
    std::vector<double> row(n, 0.0);
    col[0] = (cp + cm) * w[1];
    row[0] = col[0];
    if (n > 1) {
        col[1] = -conv + cp * w[2] + cm * w[0];
        row[1] = conv + cp * w[0] + cm * w[2];
    }
    for (std::size_t k = 2; k < n; ++k) {
        col[k] = cp * w[k + 1];
        row[k] = cm * w[k + 1];
    }
    return Toeplitz{std::move(col), std::move(row)};
}

OperatorPair assemble_pair(const ProblemSpec& p, const Grid& g, const SpatialWeights& sw,
                           const TimeWeights& tw, int j)
{
    if (j < 0 || j >= g.M) {
        throw DomainError("level index out of range");
    }
    const double sigma = tw.sigma;
    const double t = (j + sigma) * g.tau();
    const Toeplitz l = spatial_operator(p, g, sw, t);
    const double e = eta(tw, static_cast<std::size_t>(j));

    const std::size_t n = l.size();
    OperatorPair pair;
    pair.eta = e;
    pair.level = j;
    pair.A.col.resize(n);
    pair.A.row.resize(n);
    pair.B.col.resize(n);
    pair.B.row.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        pair.A.col[k] = -sigma * l.col[k];
        pair.A.row[k] = -sigma * l.row[k];
        pair.B.col[k] = (1.0 - sigma) * l.col[k];
        pair.B.row[k] = (1.0 - sigma) * l.row[k];
    }
    pair.A.col[0] += e;
    pair.A.row[0] = pair.A.col[0];
    pair.B.col[0] += e;
    pair.B.row[0] = pair.B.col[0];
    return pair;
}

std::vector<double> history_term(const TimeWeights& tw, std::span<const double> c_row,
                                 const SolutionHistory& hist, int j)
{
    if (j < 1) {
        throw DomainError("history term is defined for levels j >= 1");
    }
    const auto ju = static_cast<std::size_t>(j);
    if (c_row.size() != ju + 1 || hist.levels.size() < ju + 1) {
        throw DimensionError("history term needs c_0..c_j and levels u^0..u^j");
    }
    const std::size_t n = hist.levels[0].size();
    std::vector<double> h(n, 0.0);

    // sum_{s=0}^{j-1} c_{j-s} (u^{s+1} - u^s) regrouped per level:
    // u^j gets c_1, u^0 gets -c_j, u^s gets c_{j-s+1} - c_{j-s}.
    for (std::size_t s = 0; s <= ju; ++s) {
        double w;
        if (s == ju) {
            w = c_row[1];
        } else if (s == 0) {
            w = -c_row[ju];
        } else {
            w = c_row[ju - s + 1] - c_row[ju - s];
        }
        const double* u = hist.levels[s].data();
        for (std::size_t i = 0; i < n; ++i) {
            h[i] += w * u[i];
        }
    }
    const double scale = tw.scale();
    for (auto& v : h) {
        v *= scale;
    }
    return h;
}

HistoryAccumulator::HistoryAccumulator(const TimeWeights& tw, std::size_t n, std::size_t leaf)
    : n_(n), leaf_(leaf), scale_(tw.scale()), a_(tw.a), b_(tw.b)
{
    if (n == 0) {
        throw DimensionError("history accumulator needs a positive dimension");
    }
    if (leaf == 0 || (leaf & (leaf - 1)) != 0) {
        throw DomainError("history accumulator leaf size must be a power of two");
    }
    const std::size_t levels = tw.max_level();
    kernel_.assign(levels, 0.0);
    for (std::size_t m = 1; m + 1 <= levels; ++m) {
        kernel_[m] = a_[m] + b_[m + 1] - b_[m];
    }
    if (levels >= 2) {
        acc_.resize(levels - 1);
    }
}

void HistoryAccumulator::push(std::span<const double> diff)
{
    if (diff.size() != n_) {
        throw DimensionError("history difference has the wrong length");
    }
    if (pushed_ == 0) {
        first_.assign(diff.begin(), diff.end());
        ++pushed_;
        return;
    }
    diffs_.emplace_back(diff.begin(), diff.end());
    ++pushed_;
    const std::size_t end = diffs_.size();
    if (end % leaf_ == 0) {
        // The dyadic block that ends here has size leaf * (largest power of
        // two dividing end / leaf).
        const std::size_t q = end / leaf_;
        cross(end, leaf_ * (q & (~q + 1)));
    }
}

const HistoryAccumulator::KernelSpectrum& HistoryAccumulator::kernel_for(std::size_t block)
{
    for (const auto& k : kernels_) {
        if (k.block == block) {
            return k;
        }
    }
    KernelSpectrum k;
    k.block = block;
    k.plan = fft_plan(2 * block);
    k.spectrum.assign(2 * block, Complex(0.0, 0.0));
    for (std::size_t q = 1; q < 2 * block && q < kernel_.size(); ++q) {
        k.spectrum[q] = Complex(kernel_[q], 0.0);
    }
    k.plan->execute(k.spectrum, Direction::Forward);
    kernels_.push_back(std::move(k));
    return kernels_.back();
}

void HistoryAccumulator::cross(std::size_t end, std::size_t block)
{
    // Sources i in [end - block, end) feed targets t in [end, end + block).
    const std::size_t targets = acc_.size();
    if (end >= targets) {
        return;
    }
    const std::size_t count = std::min(block, targets - end);
    const KernelSpectrum& k = kernel_for(block);
    const std::size_t len = 2 * block;
    const std::size_t src0 = end - block;
    for (std::size_t t = end; t < end + count; ++t) {
        if (acc_[t].empty()) {
            acc_[t].assign(n_, 0.0);
        }
    }
    std::vector<Complex> buf(len);
    // Two spatial nodes per complex transform: the kernel is real, so the
    // real and imaginary parts convolve independently.
    for (std::size_t x = 0; x < n_; x += 2) {
        const bool pair = x + 1 < n_;
        for (std::size_t r = 0; r < block; ++r) {
            const auto& d = diffs_[src0 + r];
            buf[r] = Complex(d[x], pair ? d[x + 1] : 0.0);
        }
        std::fill(buf.begin() + static_cast<std::ptrdiff_t>(block), buf.end(), Complex(0.0, 0.0));
        k.plan->execute(buf, Direction::Forward);
        for (std::size_t q = 0; q < len; ++q) {
            buf[q] *= k.spectrum[q];
        }
        k.plan->execute(buf, Direction::Inverse);
        for (std::size_t c = 0; c < count; ++c) {
            const Complex z = buf[block + c];
            auto& row = acc_[end + c];
            row[x] += z.real();
            if (pair) {
                row[x + 1] += z.imag();
            }
        }
    }
}

void HistoryAccumulator::term(std::size_t j, std::span<double> out) const
{
    if (j < 1 || j != pushed_) {
        throw DomainError("history term requested out of order");
    }
    if (out.size() != n_) {
        throw DimensionError("history term output has the wrong length");
    }
    if (j >= a_.size()) {
        throw DomainError("history term level exceeds the time weights");
    }
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t t = j - 1;
    if (t > 0) {
        if (t < acc_.size() && !acc_[t].empty()) {
            std::copy(acc_[t].begin(), acc_[t].end(), out.begin());
        }
        for (std::size_t i = (t / leaf_) * leaf_; i < t; ++i) {
            const double w = kernel_[t - i];
            const double* d = diffs_[i].data();
            for (std::size_t x = 0; x < n_; ++x) {
                out[x] += w * d[x];
            }
        }
    }
    const double last = a_[j] - b_[j];
    for (std::size_t x = 0; x < n_; ++x) {
        out[x] = scale_ * (out[x] + last * first_[x]);
    }
}

std::vector<double> HistoryAccumulator::term(std::size_t j) const
{
    std::vector<double> out(n_);
    term(j, out);
    return out;
}

std::vector<double> rhs(const OperatorPair& pair, const SolutionHistory& hist,
                        std::optional<std::span<const double>> history, std::span<const double> f_vec)
{
    const auto& u = hist.levels.at(static_cast<std::size_t>(pair.level));
    std::vector<double> g = ToeplitzOperator(pair.B).apply(u);
    if (f_vec.size() != g.size() || (history && history->size() != g.size())) {
        throw DimensionError("rhs dimension mismatch");
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] += f_vec[i];
        if (history) {
            g[i] -= (*history)[i];
        }
    }
    return g;
}

std::vector<double> sample_f(const ProblemSpec& p, const Grid& g, int j)
{
    const double t = (j + p.orders.sigma) * g.tau();
    std::vector<double> f(g.interior());
    for (int i = 1; i < g.N; ++i) {
        f[static_cast<std::size_t>(i - 1)] = p.source(g.x(i), t);
    }
    return f;
}

std::vector<double> sample_initial(const ProblemSpec& p, const Grid& g)
{
    std::vector<double> u(g.interior());
    for (int i = 1; i < g.N; ++i) {
        u[static_cast<std::size_t>(i - 1)] = p.initial(g.x(i));
    }
    return u;
}

namespace {

struct RunContext {
    SpatialWeights sw;
    TimeWeights tw;
    std::optional<HistoryAccumulator> acc;  // empty for direct summation
};

RunContext prepare(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg)
{
    const Grid checked = Grid::make(g.a, g.b, g.N, g.T, g.M);
    RunContext ctx;
    ctx.sw = shifted_weights(p.orders.beta, static_cast<std::size_t>(checked.N));
    ctx.tw = time_ab(p.orders.alpha, static_cast<std::size_t>(checked.M), checked.tau());
    if (cfg.history == HistoryEvaluation::Convolution) {
        ctx.acc.emplace(ctx.tw, checked.interior());
    }
    return ctx;
}

// Stores u^{j+1} and feeds u^{j+1} - u^j to the accumulator.
void advance(RunContext& ctx, SolutionHistory& hist, std::vector<double> next)
{
    if (ctx.acc) {
        std::vector<double> diff(next);
        const auto& prev = hist.levels.back();
        for (std::size_t i = 0; i < diff.size(); ++i) {
            diff[i] -= prev[i];
        }
        ctx.acc->push(diff);
    }
    hist.levels.push_back(std::move(next));
}

SolutionHistory start_history(const ProblemSpec& p, const Grid& g)
{
    SolutionHistory hist;
    hist.levels.reserve(static_cast<std::size_t>(g.M) + 1);
    hist.levels.push_back(sample_initial(p, g));
    return hist;
}

// B u^j - H + f with a prebuilt B action.
template <typename MatvecB>
std::vector<double> level_rhs(const MatvecB& apply_b, RunContext& ctx, const ProblemSpec& p,
                              const Grid& g, const SolutionHistory& hist, int j)
{
    const auto& u = hist.levels[static_cast<std::size_t>(j)];
    std::vector<double> rhs_vec(u.size());
    apply_b(u, rhs_vec);
    const auto f = sample_f(p, g, j);
    for (std::size_t i = 0; i < rhs_vec.size(); ++i) {
        rhs_vec[i] += f[i];
    }
    if (j >= 1) {
        std::vector<double> h;
        if (ctx.acc) {
            h = ctx.acc->term(static_cast<std::size_t>(j));
        } else {
            const auto c = time_c_row(ctx.tw, static_cast<std::size_t>(j));
            h = history_term(ctx.tw, c, hist, j);
        }
        for (std::size_t i = 0; i < rhs_vec.size(); ++i) {
            rhs_vec[i] -= h[i];
        }
    }
    return rhs_vec;
}

LinearOperator as_operator(const ToeplitzOperator& op)
{
    return LinearOperator{op.size(), [&op](std::span<const double> x, std::span<double> y) { op.apply(x, y); }};
}

LinearOperator as_preconditioner(const CirculantOperator& c)
{
    return LinearOperator{c.size(), [&c](std::span<const double> x, std::span<double> y) { c.solve(x, y); }};
}

constexpr int kMaxRestarts = 4;

/// Strang-preconditioned CGS from a cold start. A run that stops short of the
/// tolerance is restarted from its best iterate, which resets the gap between
/// the recursive and the true residual; the report then covers every run and
/// its residuals stay relative to ||b||.
CgsResult pcgs_solve(const Toeplitz& a, std::span<const double> b, const SolverConfig& cfg)
{
    const ToeplitzOperator op(a);
    const CirculantOperator pre = strang(a);
    if (!pre.nonsingular()) {
        throw SingularError("Strang preconditioner is singular", pre.weakest_eigenvalue());
    }
    const LinearOperator aop = as_operator(op);
    const LinearOperator mop = as_preconditioner(pre);
    CgsResult res = cgs(aop, mop, b, CgsOptions{cfg.tol, cfg.maxit});
    for (int restart = 0; restart < kMaxRestarts && !res.report.converged; ++restart) {
        const double rel = res.report.relative_residual;
        const int remaining = cfg.maxit - res.report.iterations;
        if (!(rel > 0.0) || remaining < 1) {
            break;
        }
        CgsResult next;
        try {
            next = cgs(aop, mop, b, CgsOptions{std::min(0.5, cfg.tol / rel), remaining}, res.x);
        } catch (const BreakdownError&) {
            break;
        }
        const auto& hist = next.report.residual_history;
        for (std::size_t k = 1; k < hist.size(); ++k) {
            res.report.residual_history.push_back(rel * hist[k]);
        }
        res.report.iterations += next.report.iterations;
        const double next_rel = rel * next.report.relative_residual;
        if (next_rel < rel) {
            res.x = std::move(next.x);
            res.report.relative_residual = next_rel;
        }
        res.report.converged = res.report.relative_residual < cfg.tol;
        if (next.report.relative_residual > 0.5) {
            break;
        }
    }
    return res;
}

void require_converged(const SolveReport& rep, const SolverConfig& cfg, SolutionHistory& hist,
                       const std::string& what)
{
    if (rep.converged) {
        return;
    }
    std::ostringstream msg;
    msg << what << ": PCGS stopped after " << rep.iterations << " iterations at relative residual "
        << rep.relative_residual << " (tolerance " << cfg.tol << ")";
    if (rep.relative_residual <= cfg.accept_residual) {
        hist.notes.push_back(msg.str());
        return;
    }
    throw std::runtime_error(msg.str());
}

SolveReport direct_report()
{
    SolveReport rep;
    rep.converged = true;
    return rep;
}

[[noreturn]] void rethrow_at_level(int j)
{
    try {
        throw;
    } catch (const LevelError&) {
        throw;
    } catch (const std::exception& e) {
        const std::string prefix = "level " + std::to_string(j) + ": ";
        const std::string what = e.what();
        throw LevelError(what.rfind(prefix, 0) == 0 ? what : prefix + what, j);
    }
}

}  // namespace

SolutionHistory run_variable(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg)
{
    RunContext ctx = prepare(p, g, cfg);
    SolutionHistory hist = start_history(p, g);
    const bool dense = cfg.kind == SolverKind::Dense;

    for (int j = 0; j < g.M; ++j) {
        try {
            const OperatorPair pair = assemble_pair(p, g, ctx.sw, ctx.tw, j);
            if (dense) {
                const DenseMatrix bd = pair.B.dense();
                const auto g_vec = level_rhs(
                    [&bd](std::span<const double> x, std::span<double> y) { bd.multiply(x, y); }, ctx, p, g,
                    hist, j);
                const LuFactorization lu(pair.A.dense());
                advance(ctx, hist, lu.solve(g_vec));
                hist.reports.push_back(direct_report());
                hist.methods.push_back(LevelMethod::Dense);
            } else {
                const ToeplitzOperator bop(pair.B);
                const auto g_vec = level_rhs(
                    [&bop](std::span<const double> x, std::span<double> y) { bop.apply(x, y); }, ctx, p, g,
                    hist, j);
                auto res = pcgs_solve(pair.A, g_vec, cfg);
                require_converged(res.report, cfg, hist, "level " + std::to_string(j));
                advance(ctx, hist, std::move(res.x));
                hist.reports.push_back(std::move(res.report));
                hist.methods.push_back(LevelMethod::Pcgs);
            }
        } catch (...) {
            rethrow_at_level(j);
        }
    }
    return hist;
}

SolutionHistory run_constant(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg)
{
    if (!p.constant_coefficients) {
        throw ProblemError("run_constant requires a constant-coefficient problem");
    }
    RunContext ctx = prepare(p, g, cfg);
    SolutionHistory hist = start_history(p, g);
    const std::size_t n = g.interior();

    if (cfg.kind == SolverKind::Dense) {
        // Two factorizations, A^(sigma) for level 0 and A for the rest, reused.
        const OperatorPair first = assemble_pair(p, g, ctx.sw, ctx.tw, 0);
        const LuFactorization lu0(first.A.dense());
        const DenseMatrix b0 = first.B.dense();
        std::optional<LuFactorization> lu;
        DenseMatrix b;
        if (g.M >= 2) {
            const OperatorPair later = assemble_pair(p, g, ctx.sw, ctx.tw, 1);
            lu.emplace(later.A.dense());
            b = later.B.dense();
        }
        for (int j = 0; j < g.M; ++j) {
            try {
                const DenseMatrix& bj = j == 0 ? b0 : b;
                const auto g_vec = level_rhs(
                    [&bj](std::span<const double> x, std::span<double> y) { bj.multiply(x, y); }, ctx, p, g,
                    hist, j);
                advance(ctx, hist, j == 0 ? lu0.solve(g_vec) : lu->solve(g_vec));
                hist.reports.push_back(direct_report());
                hist.methods.push_back(LevelMethod::Dense);
            } catch (...) {
                rethrow_at_level(j);
            }
        }
        return hist;
    }

    // Level 0 with A^(sigma).
    try {
        const OperatorPair first = assemble_pair(p, g, ctx.sw, ctx.tw, 0);
        const ToeplitzOperator b0(first.B);
        const auto g_vec = level_rhs(
            [&b0](std::span<const double> x, std::span<double> y) { b0.apply(x, y); }, ctx, p, g, hist, 0);
        auto res = pcgs_solve(first.A, g_vec, cfg);
        require_converged(res.report, cfg, hist, "level 0");
        advance(ctx, hist, std::move(res.x));
        hist.reports.push_back(std::move(res.report));
        hist.methods.push_back(LevelMethod::Pcgs);
    } catch (...) {
        rethrow_at_level(0);
    }
    if (g.M < 2) {
        return hist;
    }

    const OperatorPair later = assemble_pair(p, g, ctx.sw, ctx.tw, 1);
    const ToeplitzOperator bop(later.B);
    const ToeplitzOperator aop(later.A);
    const CirculantOperator pre = strang(later.A);

    std::optional<GsfInverse> gsf;
    if (cfg.kind == SolverKind::Auto) {
        try {
            std::vector<double> e(n, 0.0);
            e[0] = 1.0;
            auto xs = pcgs_solve(later.A, e, cfg);
            e[0] = 0.0;
            e[n - 1] = 1.0;
            auto ys = pcgs_solve(later.A, e, cfg);
            hist.setup_reports.push_back(xs.report);
            hist.setup_reports.push_back(ys.report);
            require_converged(xs.report, cfg, hist, "GSF generator A x = e_1");
            require_converged(ys.report, cfg, hist, "GSF generator A y = e_n");
            gsf.emplace(gsf_build(later.A, xs.x, ys.x));
        } catch (const std::exception& e) {
            hist.notes.push_back(std::string("GSF unavailable, falling back to per-level PCGS: ") + e.what());
            gsf.reset();
        }
    }

    for (int j = 1; j < g.M; ++j) {
        try {
            const auto g_vec = level_rhs(
                [&bop](std::span<const double> x, std::span<double> y) { bop.apply(x, y); }, ctx, p, g, hist, j);
            if (gsf) {
                advance(ctx, hist, gsf->apply(g_vec));
                hist.reports.push_back(direct_report());
                hist.methods.push_back(LevelMethod::Gsf);
            } else {
                auto res = cgs(as_operator(aop), as_preconditioner(pre), g_vec, CgsOptions{cfg.tol, cfg.maxit});
                require_converged(res.report, cfg, hist, "level " + std::to_string(j));
                advance(ctx, hist, std::move(res.x));
                hist.reports.push_back(std::move(res.report));
                hist.methods.push_back(LevelMethod::Pcgs);
            }
        } catch (...) {
            rethrow_at_level(j);
        }
    }
    return hist;
}

SolutionHistory solve(const ProblemSpec& p, const Grid& g, const SolverConfig& cfg)
{
    if (p.constant_coefficients && cfg.kind != SolverKind::Pcgs) {
        return run_constant(p, g, cfg);
    }
    return run_variable(p, g, cfg);
}

}  // namespace tsfcde
