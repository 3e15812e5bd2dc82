#include "hyperspace/fhrr.hpp"

#include <cmath>
#include <numbers>

#include "hyperspace/error.hpp"

namespace hyperspace {

BaseVector fhrr_sample_base(Rng& rng, std::size_t dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "FHRR base needs dim >= 1");
  BaseVector base{BackendTag::kFhrr, std::vector<double>(dim)};
  for (auto& theta : base.values) theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return base;
}

Hypervector fhrr_encode(const BaseVector& base, double x) {
  if (base.tag != BackendTag::kFhrr) throw Error(ErrorCode::kBackendMismatch, "expected an FHRR base");
  if (base.dim() < 1) throw Error(ErrorCode::kInvalidArgument, "FHRR base needs dim >= 1");
  require_finite(x, "encode input");
  std::vector<Complex> out(base.dim());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double angle = base.values[j] * x;
    out[j] = Complex(std::cos(angle), std::sin(angle));
  }
  return Hypervector::adopt_complex(std::move(out));
}

Hypervector fhrr_bind(const Hypervector& a, const Hypervector& b) {
  require_compatible(a, b);
  const auto za = a.phasors();
  const auto zb = b.phasors();
  std::vector<Complex> out(za.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    // Written out so the compiler does not route through the Annex G
    // NaN-recovering complex multiply.
    const double re = za[j].real() * zb[j].real() - za[j].imag() * zb[j].imag();
    const double im = za[j].real() * zb[j].imag() + za[j].imag() * zb[j].real();
    out[j] = Complex(re, im);
  }
  return Hypervector::adopt_complex(std::move(out));
}

Hypervector fhrr_invert(const Hypervector& a) {
  const auto za = a.phasors();
  std::vector<Complex> out(za.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::conj(za[j]);
  return Hypervector::adopt_complex(std::move(out));
}

}  // namespace hyperspace
