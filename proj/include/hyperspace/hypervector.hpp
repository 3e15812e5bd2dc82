#pragma once

// Domain types shared by every backend: the tagged hypervector, the seed
// material behind a continuous encoder, and the HSV1 wire format.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace hyperspace {

enum class BackendTag : std::uint8_t { kHrr = 0, kFhrr = 1 };

std::string_view to_string(BackendTag tag) noexcept;
BackendTag parse_backend(std::string_view name);

using Complex = std::complex<double>;

// A D-dimensional distributed representation. HRR vectors hold D reals, FHRR
// vectors hold D complex numbers. Values are immutable once built; all
// operations return new vectors.
//
// In memory elements are double precision. The wire format (serialize) stores
// float32 / complex64 payloads.
class Hypervector {
 public:
  Hypervector() = default;

  // Checked constructors: reject empty input and non-finite elements.
  static Hypervector real(std::vector<double> elements);
  static Hypervector complex(std::vector<Complex> elements);
  static Hypervector zeros(BackendTag tag, std::size_t dim);

  // Unchecked: used by backend kernels whose outputs are finite by construction.
  static Hypervector adopt_real(std::vector<double> elements) noexcept;
  static Hypervector adopt_complex(std::vector<Complex> elements) noexcept;

  BackendTag tag() const noexcept;
  std::size_t dim() const noexcept;
  bool empty() const noexcept { return dim() == 0; }

  // Throws kBackendMismatch when called for the other backend.
  std::span<const double> reals() const;
  std::span<const Complex> phasors() const;

  // Flat view of the underlying doubles: D values for HRR, 2D interleaved
  // (re, im) values for FHRR. Bundling, weighting, norms, and the real part of
  // the Hermitian inner product are all element-wise over this view, which
  // lets both backends share one kernel.
  std::span<const double> raw() const noexcept;
  std::span<double> raw_mut() noexcept;

  bool operator==(const Hypervector&) const = default;

 private:
  using Storage = std::variant<std::vector<double>, std::vector<Complex>>;
  explicit Hypervector(Storage s) noexcept : storage_(std::move(s)) {}
  Storage storage_;
};

// Seed material for one continuous encoder E_j.
//  HRR:  values = time-domain real vector b whose DFT has unit modulus.
//  FHRR: values = phases theta_j in [-pi, pi).
struct BaseVector {
  BackendTag tag = BackendTag::kHrr;
  std::vector<double> values;

  std::size_t dim() const noexcept { return values.size(); }
  bool operator==(const BaseVector&) const = default;
};

// Argument validation shared by all binary operations.
void require_compatible(const Hypervector& a, const Hypervector& b);
void require_finite(double x, std::string_view what);

// HSV1 wire format, little-endian:
//   "HSV1" | backend_tag u8 | dim u32 | payload
// payload is dim float32 (HRR) or dim interleaved float32 (re, im) pairs (FHRR).
inline constexpr std::size_t kHypervectorHeaderBytes = 4 + 1 + 4;
std::size_t payload_bytes(BackendTag tag, std::size_t dim) noexcept;

std::vector<std::uint8_t> serialize(const Hypervector& v);
Hypervector deserialize(std::span<const std::uint8_t> bytes);
void write_hypervector(std::ostream& out, const Hypervector& v);
Hypervector read_hypervector(std::istream& in);

}  // namespace hyperspace
