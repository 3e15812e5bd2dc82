#include "hyperspace/hrr.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hyperspace/error.hpp"
#include "hyperspace/fft.hpp"

namespace hyperspace {
namespace {

// Largest imaginary residue tolerated when a spectrum is returned to the time
// domain. Encoded spectra are conjugate-symmetric by construction.
constexpr double kBaseResidue = 1e-9;
constexpr double kEncodeResidue = 1e-6;

std::vector<double> to_real(std::span<const Complex> z, double tolerance) {
  std::vector<double> out(z.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    out[j] = z[j].real();
    worst = std::max(worst, std::abs(z[j].imag()));
  }
  if (!(worst < tolerance)) {
    throw Error(ErrorCode::kNonFinite,
                "HRR inverse transform left an imaginary residue of " + std::to_string(worst));
  }
  return out;
}

void require_hrr(const Hypervector& a) {
  if (a.tag() != BackendTag::kHrr) throw Error(ErrorCode::kBackendMismatch, "expected an HRR vector");
}

void require_hrr_base(const BaseVector& base) {
  if (base.tag != BackendTag::kHrr) throw Error(ErrorCode::kBackendMismatch, "expected an HRR base");
  if (base.dim() < 2) throw Error(ErrorCode::kInvalidArgument, "HRR base needs dim >= 2");
}

// exp(i * x * arg(z)) for every bin of a unit-modulus conjugate-symmetric
// spectrum. Only the lower half is evaluated; the upper half is its mirror.
void fractional_power(std::span<const double> phases, double x, std::span<Complex> out) {
  const std::size_t n = phases.size();
  for (std::size_t j = 0; j <= n / 2; ++j) {
    const double angle = phases[j] * x;
    out[j] = Complex(std::cos(angle), std::sin(angle));
  }
  for (std::size_t j = n / 2 + 1; j < n; ++j) out[j] = std::conj(out[n - j]);
}

std::vector<double> principal_phases(std::span<const double> base) {
  const auto spectrum = hrr_spectrum(base);
  std::vector<double> phases(spectrum.size());
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    double theta = std::arg(spectrum[j]);
    // arg() returns (-pi, pi]; fold pi onto -pi for the [-pi, pi) convention.
    if (theta >= std::numbers::pi) theta -= 2.0 * std::numbers::pi;
    phases[j] = theta;
  }
  return phases;
}

}  // namespace

std::vector<Complex> hrr_spectrum(std::span<const double> x) {
  std::vector<Complex> z(x.begin(), x.end());
  fft_plan(z.size())->forward(z);
  return z;
}

BaseVector hrr_sample_base(Rng& rng, std::size_t dim) {
  if (dim < 2) throw Error(ErrorCode::kInvalidArgument, "HRR base needs dim >= 2");
  std::vector<Complex> spectrum(dim, Complex(1.0, 0.0));
  for (std::size_t j = 1; j < dim - j; ++j) {
    const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    spectrum[j] = Complex(std::cos(theta), std::sin(theta));
    spectrum[dim - j] = std::conj(spectrum[j]);
  }
  fft_plan(dim)->inverse(spectrum);
  return BaseVector{BackendTag::kHrr, to_real(spectrum, kBaseResidue)};
}

Hypervector hrr_encode(const BaseVector& base, double x) {
  require_hrr_base(base);
  require_finite(x, "encode input");
  const auto phases = principal_phases(base.values);
  std::vector<Complex> z(base.dim());
  fractional_power(phases, x, z);
  fft_plan(z.size())->inverse(z);
  return Hypervector::adopt_real(to_real(z, kEncodeResidue));
}

// The forward transform of the base is shared across the whole batch; each
// sample costs one spectrum power and one inverse FFT.
std::vector<Hypervector> hrr_encode_batch(const BaseVector& base, std::span<const double> xs) {
  require_hrr_base(base);
  for (double x : xs) require_finite(x, "encode input");
  std::vector<Hypervector> out;
  out.reserve(xs.size());
  if (xs.empty()) return out;
  const auto phases = principal_phases(base.values);
  const auto plan = fft_plan(base.dim());
  std::vector<Complex> z(base.dim());
  for (double x : xs) {
    fractional_power(phases, x, z);
    plan->inverse(z);
    out.push_back(Hypervector::adopt_real(to_real(z, kEncodeResidue)));
  }
  return out;
}

// Both real inputs share one forward transform: with z = a + i b,
// A_k = (Z_k + conj Z_{-k}) / 2 and B_k = (Z_k - conj Z_{-k}) / 2i.
Hypervector hrr_bind(const Hypervector& a, const Hypervector& b) {
  require_hrr(a);
  require_compatible(a, b);
  const std::size_t n = a.dim();
  const auto plan = fft_plan(n);
  const auto ra = a.reals();
  const auto rb = b.reals();
  std::vector<Complex> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = Complex(ra[j], rb[j]);
  plan->forward(z);
  std::vector<Complex> prod(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex zk = z[k];
    const Complex zm = std::conj(z[(n - k) % n]);
    const double ar = 0.5 * (zk.real() + zm.real());
    const double ai = 0.5 * (zk.imag() + zm.imag());
    const double br = 0.5 * (zk.imag() - zm.imag());
    const double bi = -0.5 * (zk.real() - zm.real());
    prod[k] = Complex(ar * br - ai * bi, ar * bi + ai * br);
  }
  plan->inverse(prod);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = prod[j].real();
  return Hypervector::adopt_real(std::move(out));
}

// IFFT(conj(FFT(a))) for real a is the involution a_{-j mod D}.
Hypervector hrr_invert(const Hypervector& a) {
  require_hrr(a);
  const auto ra = a.reals();
  const std::size_t n = ra.size();
  std::vector<double> out(n);
  out[0] = ra[0];
  for (std::size_t j = 1; j < n; ++j) out[j] = ra[n - j];
  return Hypervector::adopt_real(std::move(out));
}

}  // namespace hyperspace
