#pragma once

// Holographic Reduced Representations: real vectors, FFT-based fractional
// power encoding, circular-convolution binding, and conjugate-spectrum
// inversion.

#include <span>
#include <vector>

#include "hyperspace/backend.hpp"

namespace hyperspace {

// Unitary base: random phases on the free frequency bins, bins 0 and D/2
// fixed to +1, conjugate-symmetric so the time-domain vector is real.
BaseVector hrr_sample_base(Rng& rng, std::size_t dim);

// IFFT(FFT(base)^x), with the power applied to the principal phase.
Hypervector hrr_encode(const BaseVector& base, double x);
std::vector<Hypervector> hrr_encode_batch(const BaseVector& base, std::span<const double> xs);

Hypervector hrr_bind(const Hypervector& a, const Hypervector& b);
Hypervector hrr_invert(const Hypervector& a);

// Spectrum of a real vector (helper shared with tests and diagnostics).
std::vector<Complex> hrr_spectrum(std::span<const double> x);

class HrrBackend final : public Backend {
 public:
  BackendTag tag() const noexcept override { return BackendTag::kHrr; }
  BaseVector sample_base(Rng& rng, std::size_t dim) const override { return hrr_sample_base(rng, dim); }
  Hypervector encode(const BaseVector& base, double x) const override { return hrr_encode(base, x); }
  std::vector<Hypervector> encode_batch(const BaseVector& base,
                                        std::span<const double> xs) const override {
    return hrr_encode_batch(base, xs);
  }
  Hypervector bind(const Hypervector& a, const Hypervector& b) const override { return hrr_bind(a, b); }
  Hypervector invert(const Hypervector& a) const override { return hrr_invert(a); }
};

}  // namespace hyperspace
