#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "hyperspace/hypervector.hpp"

namespace hyperspace {

// Complex DFT of a fixed length n.
//
// Power-of-two lengths use an iterative in-place radix-2 transform. Other
// lengths go through Bluestein's chirp-z algorithm on a power-of-two inner
// plan, so any n >= 1 (including 8096) is supported.
//
// Conventions: forward X_k = sum_j x_j e^{-2 pi i jk/n}; inverse carries the
// 1/n factor. A plan is immutable after construction and may be shared across
// threads; transforms allocate their scratch locally.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool is_radix2() const noexcept { return bluestein_ == nullptr; }

  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

 private:
  struct Bluestein {
    std::unique_ptr<FftPlan> inner;   // power-of-two, length >= 2n - 1
    std::vector<Complex> chirp;       // e^{-i pi j^2 / n}, j < n
    std::vector<Complex> kernel_fft;  // FFT of the conjugate chirp, wrapped
  };

  void radix2(std::span<Complex> data, bool inverse) const;
  void chirp_z(std::span<Complex> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<Complex> twiddles_;  // e^{-2 pi i j / n}, j < n/2
  std::unique_ptr<Bluestein> bluestein_;
};

// Process-wide plan cache keyed by length. Built once per length under a
// lock; returned plans are immutable.
std::shared_ptr<const FftPlan> fft_plan(std::size_t n);

// O(n^2) reference DFT used as the test oracle for FftPlan.
std::vector<Complex> naive_dft(std::span<const Complex> x, bool inverse);

}  // namespace hyperspace
