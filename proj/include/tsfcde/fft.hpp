#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace tsfcde {

using Complex = std::complex<double>;

enum class Direction { Forward, Inverse };

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

/// Precomputed transform of one fixed length. Powers of two run an iterative
/// radix-2 kernel; every other length goes through Bluestein's chirp-z
/// reformulation on a power-of-two kernel of length >= 2n - 1.
///
/// Forward is unnormalized, X_k = sum_j x_j exp(-2 pi i jk / n). Inverse
/// carries the 1/n factor. Plans are immutable and may be shared across
/// threads; Bluestein scratch space is thread-local.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    bool is_pow2() const noexcept { return bluestein_len_ == 0; }

    void execute(std::span<Complex> data, Direction dir) const;

private:
    void radix2(std::span<Complex> data, bool inverse) const;
    void bluestein_forward(std::span<Complex> data) const;

    std::size_t n_ = 0;
    unsigned log2n_ = 0;
    std::vector<std::uint32_t> bitrev_;
    // Twiddles for every butterfly stage, stored back to back: the stage of
    // half-length h occupies [h - 1, 2h - 1).
    std::vector<Complex> twiddles_;

    std::size_t bluestein_len_ = 0;
    std::vector<Complex> chirp_;
    std::vector<Complex> filter_spectrum_;
    std::shared_ptr<const FftPlan> inner_;
};

/// Transform of a real sequence of even length L through one complex
/// transform of length L/2. Only the non-redundant half spectrum
/// X_0..X_{L/2} is produced or consumed.
class RealFftPlan {
public:
    explicit RealFftPlan(std::size_t len);

    std::size_t size() const noexcept { return len_; }
    std::size_t spectrum_size() const noexcept { return len_ / 2 + 1; }

    void forward(std::span<const double> x, std::span<Complex> spectrum) const;
    /// Includes the 1/L normalization.
    void inverse(std::span<const Complex> spectrum, std::span<double> x) const;

private:
    std::size_t len_ = 0;
    std::shared_ptr<const FftPlan> half_;
    std::vector<Complex> twiddles_;  // exp(-2 pi i k / L), k = 0..L/2
};

std::shared_ptr<const RealFftPlan> real_fft_plan(std::size_t len);

/// Shared plan for length n, created on first use.
std::shared_ptr<const FftPlan> fft_plan(std::size_t n);

/// In-place transform of any length >= 1. Throws DomainError on empty input.
void dft_inplace(std::span<Complex> data, Direction dir);

std::vector<Complex> dft(std::span<const Complex> v, Direction dir);

}  // namespace tsfcde
