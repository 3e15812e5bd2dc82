#pragma once

// Fourier HRR: unit phasors, direct complex exponentiation for encoding,
// element-wise products for binding, conjugation for inversion.

#include "hyperspace/backend.hpp"

namespace hyperspace {

// Phases i.i.d. uniform on [-pi, pi).
BaseVector fhrr_sample_base(Rng& rng, std::size_t dim);

// Element j = exp(i * theta_j * x).
Hypervector fhrr_encode(const BaseVector& base, double x);
Hypervector fhrr_bind(const Hypervector& a, const Hypervector& b);
Hypervector fhrr_invert(const Hypervector& a);

class FhrrBackend final : public Backend {
 public:
  BackendTag tag() const noexcept override { return BackendTag::kFhrr; }
  BaseVector sample_base(Rng& rng, std::size_t dim) const override { return fhrr_sample_base(rng, dim); }
  Hypervector encode(const BaseVector& base, double x) const override { return fhrr_encode(base, x); }
  Hypervector bind(const Hypervector& a, const Hypervector& b) const override { return fhrr_bind(a, b); }
  Hypervector invert(const Hypervector& a) const override { return fhrr_invert(a); }
};

}  // namespace hyperspace
