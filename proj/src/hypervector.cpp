#include "hyperspace/hypervector.hpp"

#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "hyperspace/detail/byteio.hpp"
#include "hyperspace/error.hpp"

namespace hyperspace {

std::string_view to_string(BackendTag tag) noexcept {
  return tag == BackendTag::kHrr ? "hrr" : "fhrr";
}

BackendTag parse_backend(std::string_view name) {
  if (name == "hrr" || name == "HRR") return BackendTag::kHrr;
  if (name == "fhrr" || name == "FHRR") return BackendTag::kFhrr;
  throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + std::string(name) + "'");
}

namespace {

template <typename Range>
void check_elements(const Range& elements) {
  if (elements.empty()) throw Error(ErrorCode::kInvalidArgument, "hypervector dim must be >= 1");
  for (const auto& e : elements) {
    if constexpr (std::is_same_v<std::decay_t<decltype(e)>, Complex>) {
      if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
        throw Error(ErrorCode::kNonFinite, "hypervector element is not finite");
      }
    } else if (!std::isfinite(e)) {
      throw Error(ErrorCode::kNonFinite, "hypervector element is not finite");
    }
  }
}

}  // namespace

Hypervector Hypervector::real(std::vector<double> elements) {
  check_elements(elements);
  return Hypervector(Storage(std::move(elements)));
}

Hypervector Hypervector::complex(std::vector<Complex> elements) {
  check_elements(elements);
  return Hypervector(Storage(std::move(elements)));
}

Hypervector Hypervector::zeros(BackendTag tag, std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "hypervector dim must be >= 1");
  if (tag == BackendTag::kHrr) return Hypervector(Storage(std::vector<double>(dim, 0.0)));
  return Hypervector(Storage(std::vector<Complex>(dim, Complex(0.0, 0.0))));
}

Hypervector Hypervector::adopt_real(std::vector<double> elements) noexcept {
  return Hypervector(Storage(std::move(elements)));
}

Hypervector Hypervector::adopt_complex(std::vector<Complex> elements) noexcept {
  return Hypervector(Storage(std::move(elements)));
}

BackendTag Hypervector::tag() const noexcept {
  return storage_.index() == 0 ? BackendTag::kHrr : BackendTag::kFhrr;
}

std::size_t Hypervector::dim() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, storage_);
}

std::span<const double> Hypervector::reals() const {
  if (const auto* v = std::get_if<std::vector<double>>(&storage_)) return *v;
  throw Error(ErrorCode::kBackendMismatch, "real view requested on an FHRR vector");
}

std::span<const Complex> Hypervector::phasors() const {
  if (const auto* v = std::get_if<std::vector<Complex>>(&storage_)) return *v;
  throw Error(ErrorCode::kBackendMismatch, "complex view requested on an HRR vector");
}

std::span<const double> Hypervector::raw() const noexcept {
  if (const auto* v = std::get_if<std::vector<double>>(&storage_)) return *v;
  const auto& c = std::get<std::vector<Complex>>(storage_);
  return {reinterpret_cast<const double*>(c.data()), 2 * c.size()};
}

std::span<double> Hypervector::raw_mut() noexcept {
  if (auto* v = std::get_if<std::vector<double>>(&storage_)) return *v;
  auto& c = std::get<std::vector<Complex>>(storage_);
  return {reinterpret_cast<double*>(c.data()), 2 * c.size()};
}

void require_compatible(const Hypervector& a, const Hypervector& b) {
  if (a.tag() != b.tag()) {
    throw Error(ErrorCode::kBackendMismatch, std::string(to_string(a.tag())) + " vs " +
                                                 std::string(to_string(b.tag())));
  }
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

void require_finite(double x, std::string_view what) {
  if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, std::string(what) + " is not finite");
}

std::size_t payload_bytes(BackendTag tag, std::size_t dim) noexcept {
  return dim * (tag == BackendTag::kHrr ? 4 : 8);
}

std::vector<std::uint8_t> serialize(const Hypervector& v) {
  detail::ByteWriter w;
  w.buffer().reserve(kHypervectorHeaderBytes + payload_bytes(v.tag(), v.dim()));
  w.bytes("HSV1");
  w.u8(static_cast<std::uint8_t>(v.tag()));
  w.u32(static_cast<std::uint32_t>(v.dim()));
  for (double x : v.raw()) w.f32(static_cast<float>(x));
  return std::move(w.buffer());
}

Hypervector deserialize(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  r.expect("HSV1");
  const std::uint8_t tag = r.u8();
  if (tag > 1) throw Error(ErrorCode::kFormat, "unknown backend tag " + std::to_string(tag));
  const std::uint32_t dim = r.u32();
  const auto backend = static_cast<BackendTag>(tag);
  if (r.remaining() != payload_bytes(backend, dim)) {
    throw Error(ErrorCode::kFormat, "payload size does not match header");
  }
  if (backend == BackendTag::kHrr) {
    std::vector<double> values(dim);
    for (auto& x : values) x = r.f32();
    return Hypervector::real(std::move(values));
  }
  std::vector<Complex> values(dim);
  for (auto& z : values) {
    const double re = r.f32();
    const double im = r.f32();
    z = Complex(re, im);
  }
  return Hypervector::complex(std::move(values));
}

void write_hypervector(std::ostream& out, const Hypervector& v) {
  const auto bytes = serialize(v);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed to write hypervector");
}

Hypervector read_hypervector(std::istream& in) {
  std::vector<std::uint8_t> header(kHypervectorHeaderBytes);
  in.read(reinterpret_cast<char*>(header.data()), static_cast<std::streamsize>(header.size()));
  if (!in) throw Error(ErrorCode::kFormat, "truncated hypervector header");
  detail::ByteReader r(header);
  r.expect("HSV1");
  const auto tag = r.u8();
  if (tag > 1) throw Error(ErrorCode::kFormat, "unknown backend tag " + std::to_string(tag));
  const auto dim = r.u32();
  const std::size_t payload = payload_bytes(static_cast<BackendTag>(tag), dim);
  header.resize(kHypervectorHeaderBytes + payload);
  in.read(reinterpret_cast<char*>(header.data() + kHypervectorHeaderBytes),
          static_cast<std::streamsize>(payload));
  if (!in) throw Error(ErrorCode::kFormat, "truncated hypervector payload");
  return deserialize(header);
}

}  // namespace hyperspace
