#include "tsfcde/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "tsfcde/errors.hpp"

namespace tsfcde {

namespace {

// Imaginary residue allowed when a real vector passes through complex arithmetic.
constexpr double kImagResidue = 1e-12;

// `scale` bounds the magnitude the result could have: input size times the
// largest gain of the diagonal action.
void check_real(std::span<const Complex> z, double scale)
{
    double max_re = 0.0;
    double max_im = 0.0;
    for (const auto& v : z) {
        max_re = std::max(max_re, std::abs(v.real()));
        max_im = std::max(max_im, std::abs(v.imag()));
    }
    if (max_im > kImagResidue * std::max(max_re, scale)) {
        throw std::logic_error("circulant action produced a non-real result");
    }
}

}  // namespace

Toeplitz Toeplitz::make(std::vector<double> col, std::vector<double> row)
{
    if (col.size() != row.size() || col.empty()) {
        throw DimensionError("Toeplitz column and row must have the same non-zero length");
    }
    if (col[0] != row[0]) {
        throw DomainError("Toeplitz column and row must share their first entry");
    }
    return Toeplitz{std::move(col), std::move(row)};
}

Toeplitz Toeplitz::identity(std::size_t n)
{
    std::vector<double> e(n, 0.0);
    e.at(0) = 1.0;
    return Toeplitz{e, e};
}

DenseMatrix Toeplitz::dense() const
{
    const std::size_t n = size();
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = entry(i, j);
        }
    }
    return m;
}

std::vector<double> toeplitz_matvec(const Toeplitz& t, std::span<const double> v)
{
    const std::size_t n = t.size();
    if (v.size() != n) {
        throw DimensionError("Toeplitz matvec dimension mismatch");
    }
    const std::size_t len = next_pow2(2 * n);
    const auto plan = real_fft_plan(len);

    std::vector<double> emb(len, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        emb[k] = t.col[k];
    }
    for (std::size_t k = 1; k < n; ++k) {
        emb[len - k] = t.row[k];
    }
    std::vector<Complex> ts(plan->spectrum_size());
    plan->forward(emb, ts);

    std::fill(emb.begin(), emb.end(), 0.0);
    std::copy(v.begin(), v.end(), emb.begin());
    std::vector<Complex> vs(plan->spectrum_size());
    plan->forward(emb, vs);

    for (std::size_t k = 0; k < vs.size(); ++k) {
        vs[k] *= ts[k];
    }
    plan->inverse(vs, emb);
    emb.resize(n);
    return emb;
}

ToeplitzOperator::ToeplitzOperator(const Toeplitz& t)
    : n_(t.size()), len_(next_pow2(2 * t.size())), plan_(real_fft_plan(len_))
{
    std::vector<double> emb(len_, 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
        emb[k] = t.col[k];
    }
    for (std::size_t k = 1; k < n_; ++k) {
        emb[len_ - k] = t.row[k];
    }
    spectrum_.resize(plan_->spectrum_size());
    plan_->forward(emb, spectrum_);
}

void ToeplitzOperator::transform(std::span<const double> v, std::span<Complex> out) const
{
    if (v.size() != n_) {
        throw DimensionError("Toeplitz operator dimension mismatch");
    }
    thread_local std::vector<double> buf;
    buf.assign(len_, 0.0);
    std::copy(v.begin(), v.end(), buf.begin());
    plan_->forward(buf, out);
}

void ToeplitzOperator::inverse_truncate(std::span<const Complex> spec, std::span<double> out) const
{
    if (out.size() != n_) {
        throw DimensionError("Toeplitz operator dimension mismatch");
    }
    thread_local std::vector<double> buf;
    buf.resize(len_);
    plan_->inverse(spec, buf);
    std::copy_n(buf.begin(), n_, out.begin());
}

std::vector<double> ToeplitzOperator::apply(std::span<const double> v) const
{
    std::vector<double> out(n_);
    apply(v, out);
    return out;
}

void ToeplitzOperator::apply(std::span<const double> v, std::span<double> out) const
{
    thread_local std::vector<Complex> spec;
    spec.resize(spectrum_.size());
    transform(v, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        spec[k] *= spectrum_[k];
    }
    inverse_truncate(spec, out);
}

CirculantOperator CirculantOperator::from_column(std::span<const double> first_column)
{
    if (first_column.empty()) {
        throw DimensionError("circulant dimension must be positive");
    }
    std::vector<Complex> eigs(first_column.begin(), first_column.end());
    dft_inplace(eigs, Direction::Forward);
    // A real column has a conjugate-symmetric spectrum; restore it exactly.
    const std::size_t n = eigs.size();
    eigs[0] = Complex(eigs[0].real(), 0.0);
    for (std::size_t k = 1; 2 * k <= n; ++k) {
        const Complex lo = eigs[k];
        const Complex hi = std::conj(eigs[n - k]);
        const Complex avg = 0.5 * (lo + hi);
        eigs[k] = avg;
        eigs[n - k] = std::conj(avg);
    }
    return from_eigenvalues(std::move(eigs));
}

CirculantOperator CirculantOperator::from_eigenvalues(std::vector<Complex> eigs)
{
    if (eigs.empty()) {
        throw DimensionError("circulant dimension must be positive");
    }
    CirculantOperator c;
    c.plan_ = fft_plan(eigs.size());
    c.eigs_ = std::move(eigs);
    double max_abs = 0.0;
    double min_abs = std::abs(c.eigs_[0]);
    for (std::size_t k = 0; k < c.eigs_.size(); ++k) {
        const double a = std::abs(c.eigs_[k]);
        max_abs = std::max(max_abs, a);
        if (a < min_abs) {
            min_abs = a;
            c.weakest_ = k;
        }
    }
    c.max_abs_ = max_abs;
    c.min_abs_ = min_abs;
    c.nonsingular_ = max_abs > 0.0 && min_abs >= kCirculantSingularity * max_abs;
    return c;
}

std::size_t CirculantOperator::weakest_eigenvalue() const
{
    return weakest_;
}

bool CirculantOperator::nonsingular() const
{
    return nonsingular_;
}

void CirculantOperator::diagonal_action(std::span<const double> v, std::span<double> out, bool invert) const
{
    const std::size_t n = eigs_.size();
    if (v.size() != n || out.size() != n) {
        throw DimensionError("circulant dimension mismatch");
    }
    thread_local std::vector<Complex> work;
    work.assign(v.begin(), v.end());
    double vmax = 0.0;
    for (double x : v) {
        vmax = std::max(vmax, std::abs(x));
    }
    plan_->execute(work, Direction::Forward);
    if (invert) {
        for (std::size_t k = 0; k < n; ++k) {
            work[k] /= eigs_[k];
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            work[k] *= eigs_[k];
        }
    }
    plan_->execute(work, Direction::Inverse);
    check_real(work, vmax * (invert ? 1.0 / min_abs_ : max_abs_));
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = work[k].real();
    }
}

std::vector<double> CirculantOperator::apply(std::span<const double> v) const
{
    std::vector<double> out(v.size());
    apply(v, out);
    return out;
}

void CirculantOperator::apply(std::span<const double> v, std::span<double> out) const
{
    diagonal_action(v, out, false);
}

std::vector<double> CirculantOperator::solve(std::span<const double> v) const
{
    std::vector<double> out(v.size());
    solve(v, out);
    return out;
}

void CirculantOperator::solve(std::span<const double> v, std::span<double> out) const
{
    if (!nonsingular_) {
        std::ostringstream msg;
        msg << "circulant operator is singular: eigenvalue " << weakest_ << " has modulus "
            << std::abs(eigs_[weakest_]);
        throw SingularError(msg.str(), weakest_);
    }
    diagonal_action(v, out, true);
}

std::vector<double> strang_column(const Toeplitz& t)
{
    const std::size_t n = t.size();
    if (n < 2) {
        throw DimensionError("Strang circulant requires n >= 2");
    }
    std::vector<double> c(n);
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = k <= half ? t.col[k] : t.row[n - k];
    }
    return c;
}

CirculantOperator strang(const Toeplitz& t)
{
    return CirculantOperator::from_column(strang_column(t));
}

bool gershgorin_check(const CirculantOperator& c, double omega1)
{
    const double bound = 2.0 * std::abs(omega1);
    for (const auto& lambda : c.eigenvalues()) {
        if (!(lambda.real() < 0.0) || std::abs(lambda) > bound) {
            return false;
        }
    }
    return true;
}

GsfInverse GsfInverse::build(const Toeplitz& a, std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = a.size();
    if (x.size() != n || y.size() != n) {
        throw DimensionError("GSF generators must match the Toeplitz dimension");
    }
    double xmax = 0.0;
    for (double v : x) {
        xmax = std::max(xmax, std::abs(v));
    }
    if (!(std::abs(x[0]) >= kGsfSingularity * xmax) || xmax == 0.0) {
        std::ostringstream msg;
        msg << "Gohberg-Semencul formula inapplicable: |x_0| = " << std::abs(x[0])
            << " below " << kGsfSingularity << " * ||x||_inf";
        throw GsfInapplicableError(msg.str());
    }

    std::vector<double> zeros(n, 0.0);
    std::vector<double> col(n, 0.0);
    std::vector<double> row(n, 0.0);

    // L_p: lower triangular, first column x.
    col.assign(x.begin(), x.end());
    row = zeros;
    row[0] = x[0];
    GsfInverse g;
    g.n_ = n;
    g.xi0_ = x[0];
    g.lp_ = ToeplitzOperator(Toeplitz{col, row});

    // R_p: upper triangular, first row (y_{n-1}, ..., y_0).
    for (std::size_t k = 0; k < n; ++k) {
        row[k] = y[n - 1 - k];
    }
    col = zeros;
    col[0] = row[0];
    g.rp_ = ToeplitzOperator(Toeplitz{col, row});

    // L0_p: strictly lower, first column (0, y_0, ..., y_{n-2}).
    col = zeros;
    for (std::size_t k = 1; k < n; ++k) {
        col[k] = y[k - 1];
    }
    g.lp0_ = ToeplitzOperator(Toeplitz{col, zeros});

    // R0_p: strictly upper, first row (0, x_{n-1}, ..., x_1).
    row = zeros;
    for (std::size_t k = 1; k < n; ++k) {
        row[k] = x[n - k];
    }
    g.rp0_ = ToeplitzOperator(Toeplitz{zeros, row});
    return g;
}

std::vector<double> GsfInverse::apply(std::span<const double> v) const
{
    std::vector<double> out(n_);
    apply(v, out);
    return out;
}

void GsfInverse::apply(std::span<const double> v, std::span<double> out) const
{
    if (v.size() != n_ || out.size() != n_) {
        throw DimensionError("GSF apply dimension mismatch");
    }
    const std::size_t m = lp_.spectrum().size();
    thread_local std::vector<Complex> vs, s1, s2;
    thread_local std::vector<double> z1, z2;
    vs.resize(m);
    s1.resize(m);
    s2.resize(m);
    z1.resize(n_);
    z2.resize(n_);

    // z1 = R0_p v, z2 = R_p v (one shared forward transform of v).
    rp_.transform(v, vs);
    const auto r0 = rp0_.spectrum();
    const auto r = rp_.spectrum();
    for (std::size_t k = 0; k < m; ++k) {
        s1[k] = vs[k] * r0[k];
        s2[k] = vs[k] * r[k];
    }
    rp_.inverse_truncate(s1, z1);
    rp_.inverse_truncate(s2, z2);

    // z = (L_p z2 - L0_p z1) / x_0, combined in the frequency domain.
    lp_.transform(z1, s1);
    lp_.transform(z2, s2);
    const auto l0 = lp0_.spectrum();
    const auto l = lp_.spectrum();
    for (std::size_t k = 0; k < m; ++k) {
        s2[k] = l[k] * s2[k] - l0[k] * s1[k];
    }
    lp_.inverse_truncate(s2, out);
    const double inv = 1.0 / xi0_;
    for (auto& z : out) {
        z *= inv;
    }
}

GsfInverse gsf_build(const Toeplitz& a, std::span<const double> x, std::span<const double> y)
{
    return GsfInverse::build(a, x, y);
}

std::vector<double> gsf_apply(const GsfInverse& g, std::span<const double> v)
{
    return g.apply(v);
}

}  // namespace tsfcde
