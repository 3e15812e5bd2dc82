#include "hyperspace/fft.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hyperspace/error.hpp"

namespace hyperspace {

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "FFT length must be >= 1");
  if (std::has_single_bit(n)) {
    const int bits = std::countr_zero(n);
    bit_reverse_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
      bit_reverse_[i] = r;
    }
    twiddles_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      twiddles_[j] = Complex(std::cos(angle), std::sin(angle));
    }
    return;
  }

  bluestein_ = std::make_unique<Bluestein>();
  const std::size_t m = std::bit_ceil(2 * n - 1);
  bluestein_->inner = std::make_unique<FftPlan>(m);
  bluestein_->chirp.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    // j^2 mod 2n keeps the angle argument small for large n.
    const auto j2 = static_cast<double>((j * j) % (2 * n));
    const double angle = -std::numbers::pi * j2 / static_cast<double>(n);
    bluestein_->chirp[j] = Complex(std::cos(angle), std::sin(angle));
  }
  std::vector<Complex> kernel(m, Complex(0.0, 0.0));
  kernel[0] = std::conj(bluestein_->chirp[0]);
  for (std::size_t j = 1; j < n; ++j) {
    kernel[j] = std::conj(bluestein_->chirp[j]);
    kernel[m - j] = kernel[j];
  }
  bluestein_->inner->forward(kernel);
  bluestein_->kernel_fft = std::move(kernel);
}

void FftPlan::forward(std::span<Complex> data) const {
  if (data.size() != n_) throw Error(ErrorCode::kDimMismatch, "FFT input length mismatch");
  if (bluestein_) {
    chirp_z(data, false);
  } else {
    radix2(data, false);
  }
}

void FftPlan::inverse(std::span<Complex> data) const {
  if (data.size() != n_) throw Error(ErrorCode::kDimMismatch, "FFT input length mismatch");
  if (bluestein_) {
    chirp_z(data, true);
  } else {
    radix2(data, true);
  }
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& z : data) z *= scale;
}

void FftPlan::radix2(std::span<Complex> data, bool inverse) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = bit_reverse_[i];
    if (i < r) std::swap(data[i], data[r]);
  }
  // Butterflies on the interleaved (re, im) view, written out by hand so the
  // compiler does not route through the Annex G complex multiply.
  double* d = reinterpret_cast<double*>(data.data());
  const double* tw = reinterpret_cast<const double*>(twiddles_.data());
  const double sign = inverse ? -1.0 : 1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      double* lo = d + 2 * start;
      double* hi = d + 2 * (start + half);
      for (std::size_t j = 0; j < half; ++j) {
        const double wr = tw[2 * j * stride];
        const double wi = sign * tw[2 * j * stride + 1];
        const double xr = hi[2 * j];
        const double xi = hi[2 * j + 1];
        const double tr = wr * xr - wi * xi;
        const double ti = wr * xi + wi * xr;
        const double ur = lo[2 * j];
        const double ui = lo[2 * j + 1];
        lo[2 * j] = ur + tr;
        lo[2 * j + 1] = ui + ti;
        hi[2 * j] = ur - tr;
        hi[2 * j + 1] = ui - ti;
      }
    }
  }
}

// Bluestein: with c_j = e^{-i pi j^2/n}, jk = (j^2 + k^2 - (k-j)^2)/2 gives
// X_k = c_k * sum_j (x_j c_j) conj(c_{k-j}), a linear convolution evaluated
// with the power-of-two inner plan.
void FftPlan::chirp_z(std::span<Complex> data, bool inverse) const {
  const auto& b = *bluestein_;
  const std::size_t m = b.inner->size();
  std::vector<Complex> work(m, Complex(0.0, 0.0));
  for (std::size_t j = 0; j < n_; ++j) {
    const Complex c = inverse ? std::conj(b.chirp[j]) : b.chirp[j];
    work[j] = data[j] * c;
  }
  b.inner->forward(work);
  if (inverse) {
    // The inverse transform uses the conjugate chirp, whose kernel spectrum is
    // the index-reversed conjugate of the forward kernel spectrum.
    for (std::size_t k = 0; k < m; ++k) work[k] *= std::conj(b.kernel_fft[(m - k) % m]);
  } else {
    for (std::size_t k = 0; k < m; ++k) work[k] *= b.kernel_fft[k];
  }
  b.inner->inverse(work);
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex c = inverse ? std::conj(b.chirp[k]) : b.chirp[k];
    data[k] = work[k] * c;
  }
}

std::shared_ptr<const FftPlan> fft_plan(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const FftPlan>(n);
  return slot;
}

std::vector<Complex> naive_dft(std::span<const Complex> x, bool inverse) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n, Complex(0.0, 0.0));
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto jk = static_cast<double>((j * k) % n);
      const double angle = sign * 2.0 * std::numbers::pi * jk / static_cast<double>(n);
      acc += x[j] * Complex(std::cos(angle), std::sin(angle));
    }
    out[k] = inverse ? acc / static_cast<double>(n) : acc;
  }
  return out;
}

}  // namespace hyperspace
