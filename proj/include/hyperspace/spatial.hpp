#pragma once

// Dataset representation, positional and value encoding, memory storage, and
// positional inversion, written against the abstract Backend contract.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperspace/backend.hpp"

namespace hyperspace {

struct Sample {
  std::vector<double> x;  // grid units
  double v = 0.0;         // cost units
};

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const ValueRange&) const = default;
};

struct Dataset {
  std::vector<Sample> samples;
  std::size_t n = 0;  // spatial dimensionality
  ValueRange value_range;

  std::size_t size() const noexcept { return samples.size(); }
};

// Checks N >= 1, equal arity, finite components, values inside value_range.
void validate(const Dataset& data);
// Builds a dataset and sets value_range to the observed min/max.
Dataset make_dataset(std::vector<Sample> samples);

// CSV with header x0,...,x{n-1},v.
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);

// Affine map [raw_lo, raw_hi] -> [exp_lo, exp_hi].
struct AffineMap {
  double raw_lo = 0.0;
  double raw_hi = 1.0;
  double exp_lo = 0.0;
  double exp_hi = 1.0;

  double operator()(double raw) const noexcept;
};

struct EncoderConfig {
  std::size_t dim = 8192;
  std::vector<AffineMap> axes;  // one per spatial dimension
  AffineMap value;              // value_range -> exponent range
  std::uint64_t seed = 0;
};

// Coordinates 0..extent-1 per axis and values in `range`, both mapped onto
// exponents [0, exponent_span].
EncoderConfig grid_encoder_config(std::size_t dim, std::span<const std::size_t> extents,
                                  ValueRange range, double position_span, double value_span,
                                  std::uint64_t seed);

// Counts of out-of-range values encountered (values are clamped, never
// silently).
struct EncodeDiagnostics {
  std::size_t clamped_values = 0;
};

class SpatialEncoder {
 public:
  SpatialEncoder(std::shared_ptr<const Backend> backend, EncoderConfig config);

  const Backend& backend() const noexcept { return *backend_; }
  std::shared_ptr<const Backend> backend_ptr() const noexcept { return backend_; }
  const EncoderConfig& config() const noexcept { return config_; }
  std::size_t n() const noexcept { return axis_bases_.size(); }
  std::size_t dim() const noexcept { return config_.dim; }
  BackendTag tag() const noexcept { return backend_->tag(); }
  ValueRange value_range() const noexcept { return {config_.value.raw_lo, config_.value.raw_hi}; }

  const BaseVector& axis_base(std::size_t j) const { return axis_bases_.at(j); }
  const BaseVector& value_base() const noexcept { return value_base_; }

 private:
  std::shared_ptr<const Backend> backend_;
  EncoderConfig config_;
  std::vector<BaseVector> axis_bases_;
  BaseVector value_base_;
};

// phi_p(x) = bind_j E_j(scale_j(x_j)): n encodings and n-1 binds.
Hypervector encode_position(const SpatialEncoder& enc, std::span<const double> x);
// Same for many coordinates; one batched encode per axis.
std::vector<Hypervector> encode_positions(const SpatialEncoder& enc,
                                          std::span<const std::vector<double>> xs);

// phi_v(v) = E_v(rescale(v)). Out-of-range values are clamped to the value
// range, logged, and counted in `diag`.
Hypervector encode_value(const SpatialEncoder& enc, double v, EncodeDiagnostics* diag = nullptr);
std::vector<Hypervector> encode_values(const SpatialEncoder& enc, std::span<const double> vs,
                                       EncodeDiagnostics* diag = nullptr);

// Bundled superposition of bound position/value pairs. N(m) is cached after
// the first query and dropped by every store.
class MemoryVector {
 public:
  MemoryVector() = default;
  MemoryVector(BackendTag tag, std::size_t dim);

  const std::optional<Hypervector>& m() const noexcept { return m_; }
  std::size_t count() const noexcept { return count_; }

  // N(m), computed once on first use.
  const Hypervector& normalized(const Backend& backend);
  bool has_normalized() const noexcept { return normalized_.has_value(); }
  // Requires a prior normalized() call; safe to share across readers.
  const Hypervector& cached_normalized() const;

  friend MemoryVector store(const Backend& backend, MemoryVector mem, const Hypervector& p,
                            const Hypervector& vv);

 private:
  std::optional<Hypervector> m_;
  std::size_t count_ = 0;
  std::optional<Hypervector> normalized_;
};

// m' = m (+) (p (x) vv): one bind and one bundle. The first store into an empty
// memory still bundles against the zero vector so the count is uniform.
MemoryVector store(const Backend& backend, MemoryVector mem, const Hypervector& p,
                   const Hypervector& vv);

struct QueryOptions {
  bool normalize_memory = true;
};

// N(m) (x) I(phi_p(x_q)). Charges one positional encode, one invert, and one bind.
Hypervector query(MemoryVector& mem, const SpatialEncoder& enc, std::span<const double> x_q,
                  QueryOptions options = {});
// Read-only variant for concurrent callers; the memory's normalized cache
// must already be populated when normalize_memory is set.
Hypervector query_prepared(const MemoryVector& mem, const SpatialEncoder& enc,
                           std::span<const double> x_q, QueryOptions options = {});
// Inversion of an already encoded query position.
Hypervector unbind_position(const MemoryVector& mem, const Backend& backend,
                            const Hypervector& position, QueryOptions options = {});

}  // namespace hyperspace
