#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsfcde {

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }

    std::vector<double> multiply(std::span<const double> v) const;
    void multiply(std::span<const double> v, std::span<double> out) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Gaussian elimination with partial pivoting, factored once and reusable
/// for any number of right-hand sides.
class LuFactorization {
public:
    /// Throws SingularError naming the column whose pivot candidates are all zero.
    explicit LuFactorization(DenseMatrix a);

    std::size_t size() const noexcept { return n_; }

    std::vector<double> solve(std::span<const double> b) const;
    void solve(std::span<const double> b, std::span<double> x) const;

private:
    std::size_t n_ = 0;
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

std::vector<double> dense_lu_solve(const DenseMatrix& a, std::span<const double> b);

}  // namespace tsfcde
