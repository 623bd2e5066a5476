#include "tsfcde/dense.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "tsfcde/errors.hpp"

namespace tsfcde {

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> v) const
{
    std::vector<double> out(rows_);
    multiply(v, out);
    return out;
}

void DenseMatrix::multiply(std::span<const double> v, std::span<double> out) const
{
    if (v.size() != cols_ || out.size() != rows_) {
        throw DimensionError("dense matvec dimension mismatch");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* r = data_.data() + i * cols_;
        double acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            acc += r[j] * v[j];
        }
        out[i] = acc;
    }
}

LuFactorization::LuFactorization(DenseMatrix a) : n_(a.rows()), lu_(std::move(a)), perm_(n_)
{
    if (lu_.rows() != lu_.cols()) {
        throw DimensionError("LU factorization requires a square matrix");
    }
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const std::size_t n = n_;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) {
            throw SingularError("matrix is singular: zero pivot column " + std::to_string(k), k);
        }
        if (p != k) {
            auto rk = lu_.row(k);
            auto rp = lu_.row(p);
            std::swap_ranges(rk.begin(), rk.end(), rp.begin());
            std::swap(perm_[k], perm_[p]);
        }
        const double* pivot_row = lu_.row(k).data();
        const double inv_pivot = 1.0 / pivot_row[k];
        for (std::size_t i = k + 1; i < n; ++i) {
            double* r = lu_.row(i).data();
            const double l = r[k] * inv_pivot;
            r[k] = l;
            if (l == 0.0) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                r[j] -= l * pivot_row[j];
            }
        }
    }
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const
{
    std::vector<double> x(n_);
    solve(b, x);
    return x;
}

void LuFactorization::solve(std::span<const double> b, std::span<double> x) const
{
    if (b.size() != n_ || x.size() != n_) {
        throw DimensionError("LU solve dimension mismatch");
    }
    if (b.data() == x.data()) {
        const std::vector<double> copy(b.begin(), b.end());
        solve(copy, x);
        return;
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const double* r = lu_.row(i).data();
        double acc = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) {
            acc -= r[j] * x[j];
        }
        x[i] = acc;
    }
    for (std::size_t i = n_; i-- > 0;) {
        const double* r = lu_.row(i).data();
        double acc = x[i];
        for (std::size_t j = i + 1; j < n_; ++j) {
            acc -= r[j] * x[j];
        }
        x[i] = acc / r[i];
    }
}

std::vector<double> dense_lu_solve(const DenseMatrix& a, std::span<const double> b)
{
    return LuFactorization(a).solve(b);
}

}  // namespace tsfcde
