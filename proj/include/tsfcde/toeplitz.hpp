#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "tsfcde/dense.hpp"
#include "tsfcde/fft.hpp"

namespace tsfcde {

/// n x n Toeplitz matrix given by its first column (t_0, t_1, ..., t_{n-1})
/// and first row (t_0, t_{-1}, ..., t_{-(n-1)}).
struct Toeplitz {
    std::vector<double> col;
    std::vector<double> row;

    /// Throws DimensionError on length mismatch and DomainError if col[0] != row[0].
    static Toeplitz make(std::vector<double> col, std::vector<double> row);
    static Toeplitz identity(std::size_t n);

    std::size_t size() const noexcept { return col.size(); }
    double entry(std::size_t i, std::size_t j) const { return i >= j ? col[i - j] : row[j - i]; }
    DenseMatrix dense() const;
};

/// T v through a zero-padded circulant embedding of power-of-two length
/// >= 2n (three real transforms).
std::vector<double> toeplitz_matvec(const Toeplitz& t, std::span<const double> v);

/// Toeplitz matrix whose embedding spectrum is computed once; each product
/// then costs one forward and one inverse real transform.
class ToeplitzOperator {
public:
    ToeplitzOperator() = default;
    explicit ToeplitzOperator(const Toeplitz& t);

    std::size_t size() const noexcept { return n_; }
    std::size_t embedding_size() const noexcept { return len_; }

    std::vector<double> apply(std::span<const double> v) const;
    void apply(std::span<const double> v, std::span<double> out) const;

    /// Half spectrum of the embedding circulant's first column.
    std::span<const Complex> spectrum() const noexcept { return spectrum_; }

    /// Half spectrum of v zero-padded to the embedding length.
    void transform(std::span<const double> v, std::span<Complex> out) const;
    /// Inverse transform of a half spectrum, keeping the first n entries.
    void inverse_truncate(std::span<const Complex> spec, std::span<double> out) const;

private:
    std::size_t n_ = 0;
    std::size_t len_ = 0;
    std::shared_ptr<const RealFftPlan> plan_;
    std::vector<Complex> spectrum_;
};

/// Circulant matrix stored as the DFT of its first column (its eigenvalues).
class CirculantOperator {
public:
    CirculantOperator() = default;

    static CirculantOperator from_column(std::span<const double> first_column);
    static CirculantOperator from_eigenvalues(std::vector<Complex> eigs);

    std::size_t size() const noexcept { return eigs_.size(); }
    std::span<const Complex> eigenvalues() const noexcept { return eigs_; }

    /// Index of the eigenvalue with smallest modulus.
    std::size_t weakest_eigenvalue() const;
    /// Every |lambda| >= 1e-14 max |lambda|.
    bool nonsingular() const;

    std::vector<double> apply(std::span<const double> v) const;
    void apply(std::span<const double> v, std::span<double> out) const;

    /// Throws SingularError with the offending eigenvalue index.
    std::vector<double> solve(std::span<const double> v) const;
    void solve(std::span<const double> v, std::span<double> out) const;

private:
    void diagonal_action(std::span<const double> v, std::span<double> out, bool invert) const;

    std::vector<Complex> eigs_;
    std::shared_ptr<const FftPlan> plan_;
    std::size_t weakest_ = 0;
    double max_abs_ = 0.0;
    double min_abs_ = 0.0;
    bool nonsingular_ = false;
};

/// Relative modulus below which a circulant eigenvalue counts as zero.
inline constexpr double kCirculantSingularity = 1e-14;

/// Strang circulant: copies the central band, c_k = col[k] for k <= n/2 and
/// c_k = row[n - k] for k > n/2 (the midpoint at even n comes from the column).
std::vector<double> strang_column(const Toeplitz& t);
CirculantOperator strang(const Toeplitz& t);

/// Bounds proved for Strang circulants of the W_beta blocks: every eigenvalue
/// has negative real part and modulus at most 2 |omega_1|.
bool gershgorin_check(const CirculantOperator& c, double omega1);

/// Relative size below which the leading entry x_0 makes the Gohberg-Semencul
/// representation unusable.
inline constexpr double kGsfSingularity = 1e-12;

/// Inverse of a Toeplitz matrix A from x = A^{-1} e_1 and y = A^{-1} e_n:
///   A^{-1} = (L_p R_p - L0_p R0_p) / x_0
/// with L_p lower triangular (first column x), R_p upper triangular (first
/// row y reversed), L0_p strictly lower (first column 0, y_0..y_{n-2}) and
/// R0_p strictly upper (first row 0, x_{n-1}..x_1).
class GsfInverse {
public:
    /// Throws DimensionError or GsfInapplicableError.
    static GsfInverse build(const Toeplitz& a, std::span<const double> x, std::span<const double> y);

    std::size_t size() const noexcept { return n_; }
    double xi0() const noexcept { return xi0_; }

    std::vector<double> apply(std::span<const double> v) const;
    void apply(std::span<const double> v, std::span<double> out) const;

    const ToeplitzOperator& lower() const noexcept { return lp_; }
    const ToeplitzOperator& upper() const noexcept { return rp_; }
    const ToeplitzOperator& lower0() const noexcept { return lp0_; }
    const ToeplitzOperator& upper0() const noexcept { return rp0_; }

private:
    std::size_t n_ = 0;
    double xi0_ = 0.0;
    ToeplitzOperator lp_;
    ToeplitzOperator rp_;
    ToeplitzOperator lp0_;
    ToeplitzOperator rp0_;
};

GsfInverse gsf_build(const Toeplitz& a, std::span<const double> x, std::span<const double> y);
std::vector<double> gsf_apply(const GsfInverse& g, std::span<const double> v);

}  // namespace tsfcde
