#include "tsfcde/fft.hpp"

#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "tsfcde/errors.hpp"

namespace tsfcde {

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

FftPlan::FftPlan(std::size_t n) : n_(n)
{
    if (n == 0) {
        throw DomainError("FFT length must be at least 1");
    }
    if ((n & (n - 1)) == 0) {
        while ((std::size_t{1} << log2n_) < n) {
            ++log2n_;
        }
        bitrev_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t r = 0;
            for (unsigned bit = 0; bit < log2n_; ++bit) {
                r |= ((i >> bit) & 1u) << (log2n_ - 1 - bit);
            }
            bitrev_[i] = r;
        }
        twiddles_.resize(n > 1 ? n - 1 : 0);
        for (std::size_t half = 1; half < n; half <<= 1) {
            for (std::size_t k = 0; k < half; ++k) {
                const double angle = -std::numbers::pi * static_cast<double>(k) / static_cast<double>(half);
                twiddles_[half - 1 + k] = Complex(std::cos(angle), std::sin(angle));
            }
        }
        return;
    }

    bluestein_len_ = next_pow2(2 * n - 1);
    inner_ = fft_plan(bluestein_len_);

    // chirp_k = exp(-i pi k^2 / n); k^2 is reduced mod 2n in integers so the
    // angle stays accurate for large k.
    chirp_.resize(n);
    const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t kk = (static_cast<std::uint64_t>(k) * k) % two_n;
        const double angle = -std::numbers::pi * static_cast<double>(kk) / static_cast<double>(n);
        chirp_[k] = Complex(std::cos(angle), std::sin(angle));
    }
    filter_spectrum_.assign(bluestein_len_, Complex(0.0, 0.0));
    filter_spectrum_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n; ++k) {
        filter_spectrum_[k] = std::conj(chirp_[k]);
        filter_spectrum_[bluestein_len_ - k] = std::conj(chirp_[k]);
    }
    inner_->execute(filter_spectrum_, Direction::Forward);
}

void FftPlan::radix2(std::span<Complex> a, bool inverse) const
{
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    Complex* data = a.data();
    for (std::size_t half = 1; half < n; half <<= 1) {
        const Complex* w = twiddles_.data() + (half - 1);
        for (std::size_t start = 0; start < n; start += 2 * half) {
            Complex* lo = data + start;
            Complex* hi = lo + half;
            for (std::size_t k = 0; k < half; ++k) {
                const Complex tw = inverse ? std::conj(w[k]) : w[k];
                // Explicit complex multiply; avoids the NaN-checking library path.
                const double re = hi[k].real() * tw.real() - hi[k].imag() * tw.imag();
                const double im = hi[k].real() * tw.imag() + hi[k].imag() * tw.real();
                const Complex t(re, im);
                hi[k] = lo[k] - t;
                lo[k] += t;
            }
        }
    }
}

void FftPlan::bluestein_forward(std::span<Complex> data) const
{
    thread_local std::vector<Complex> work;
    const std::size_t m = bluestein_len_;
    work.assign(m, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < n_; ++k) {
        work[k] = data[k] * chirp_[k];
    }
    inner_->execute(work, Direction::Forward);
    for (std::size_t k = 0; k < m; ++k) {
        work[k] *= filter_spectrum_[k];
    }
    inner_->execute(work, Direction::Inverse);
    for (std::size_t k = 0; k < n_; ++k) {
        data[k] = work[k] * chirp_[k];
    }
}

void FftPlan::execute(std::span<Complex> data, Direction dir) const
{
    if (data.size() != n_) {
        throw DimensionError("FFT plan length does not match the data length");
    }
    const bool inverse = dir == Direction::Inverse;
    if (n_ == 1) {
        return;
    }
    if (is_pow2()) {
        radix2(data, inverse);
    } else if (!inverse) {
        bluestein_forward(data);
    } else {
        // IDFT(x) = conj(DFT(conj(x))) / n
        for (auto& z : data) {
            z = std::conj(z);
        }
        bluestein_forward(data);
        for (auto& z : data) {
            z = std::conj(z);
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (auto& z : data) {
            z *= inv_n;
        }
    }
}

std::shared_ptr<const FftPlan> fft_plan(std::size_t n)
{
    static std::mutex mutex;
    static std::unordered_map<std::size_t, std::shared_ptr<const FftPlan>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(n); it != cache.end()) {
            return it->second;
        }
    }
    // Built outside the lock: a Bluestein plan requests its inner plan.
    auto plan = std::make_shared<const FftPlan>(n);
    std::lock_guard lock(mutex);
    return cache.try_emplace(n, std::move(plan)).first->second;
}

RealFftPlan::RealFftPlan(std::size_t len) : len_(len)
{
    if (len < 2 || len % 2 != 0) {
        throw DomainError("real FFT length must be even and at least 2");
    }
    half_ = fft_plan(len / 2);
    twiddles_.resize(len / 2 + 1);
    for (std::size_t k = 0; k <= len / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
        twiddles_[k] = Complex(std::cos(angle), std::sin(angle));
    }
}

void RealFftPlan::forward(std::span<const double> x, std::span<Complex> spectrum) const
{
    if (x.size() != len_ || spectrum.size() != spectrum_size()) {
        throw DimensionError("real FFT buffer sizes do not match the plan");
    }
    const std::size_t half = len_ / 2;
    thread_local std::vector<Complex> z;
    z.resize(half);
    for (std::size_t k = 0; k < half; ++k) {
        z[k] = Complex(x[2 * k], x[2 * k + 1]);
    }
    half_->execute(z, Direction::Forward);
    for (std::size_t k = 0; k <= half; ++k) {
        const Complex zk = z[k % half];
        const Complex zc = std::conj(z[(half - k) % half]);
        const Complex even = 0.5 * (zk + zc);
        const Complex odd = Complex(0.0, -0.5) * (zk - zc);
        spectrum[k] = even + twiddles_[k] * odd;
    }
}

void RealFftPlan::inverse(std::span<const Complex> spectrum, std::span<double> x) const
{
    if (x.size() != len_ || spectrum.size() != spectrum_size()) {
        throw DimensionError("real FFT buffer sizes do not match the plan");
    }
    const std::size_t half = len_ / 2;
    thread_local std::vector<Complex> z;
    z.resize(half);
    for (std::size_t k = 0; k < half; ++k) {
        const Complex xk = spectrum[k];
        const Complex xh = std::conj(spectrum[half - k]);  // X_{k + L/2}
        const Complex even = 0.5 * (xk + xh);
        const Complex odd = 0.5 * (xk - xh) * std::conj(twiddles_[k]);
        z[k] = even + Complex(0.0, 1.0) * odd;
    }
    half_->execute(z, Direction::Inverse);
    for (std::size_t k = 0; k < half; ++k) {
        x[2 * k] = z[k].real();
        x[2 * k + 1] = z[k].imag();
    }
}

std::shared_ptr<const RealFftPlan> real_fft_plan(std::size_t len)
{
    static std::mutex mutex;
    static std::unordered_map<std::size_t, std::shared_ptr<const RealFftPlan>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(len); it != cache.end()) {
            return it->second;
        }
    }
    auto plan = std::make_shared<const RealFftPlan>(len);
    std::lock_guard lock(mutex);
    return cache.try_emplace(len, std::move(plan)).first->second;
}

void dft_inplace(std::span<Complex> data, Direction dir)
{
    if (data.empty()) {
        throw DomainError("dft requires a non-empty sequence");
    }
    fft_plan(data.size())->execute(data, dir);
}

std::vector<Complex> dft(std::span<const Complex> v, Direction dir)
{
    std::vector<Complex> out(v.begin(), v.end());
    dft_inplace(out, dir);
    return out;
}

}  // namespace tsfcde
