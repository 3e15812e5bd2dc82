#include "hyperspace/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "hyperspace/error.hpp"

namespace hyperspace {

void validate(const Dataset& data) {
  if (data.samples.empty()) throw Error(ErrorCode::kInvalidArgument, "dataset needs N >= 1");
  if (data.n == 0) throw Error(ErrorCode::kInvalidArgument, "dataset needs n >= 1");
  if (!(data.value_range.lo <= data.value_range.hi)) {
    throw Error(ErrorCode::kInvalidArgument, "dataset value range is inverted");
  }
  for (const auto& s : data.samples) {
    if (s.x.size() != data.n) throw Error(ErrorCode::kDimMismatch, "sample arity differs from n");
    for (double c : s.x) require_finite(c, "sample coordinate");
    require_finite(s.v, "sample value");
    if (s.v < data.value_range.lo || s.v > data.value_range.hi) {
      throw Error(ErrorCode::kInvalidArgument, "sample value outside the dataset value range");
    }
  }
}

Dataset make_dataset(std::vector<Sample> samples) {
  Dataset data;
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "dataset needs N >= 1");
  data.n = samples.front().x.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : samples) {
    lo = std::min(lo, s.v);
    hi = std::max(hi, s.v);
  }
  data.value_range = {lo, hi};
  data.samples = std::move(samples);
  validate(data);
  return data;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t j = 0; j < data.n; ++j) out << 'x' << j << ',';
  out << "v\n";
  std::ostringstream row;
  row.imbue(std::locale::classic());
  row << std::setprecision(17);
  for (const auto& s : data.samples) {
    row.str("");
    for (double c : s.x) row << c << ',';
    row << s.v << '\n';
    out << row.str();
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write dataset CSV");
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, std::size_t line_no) {
  std::istringstream is(field);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (is.fail() || !(is >> std::ws).eof()) {
    throw Error(ErrorCode::kFormat,
                "line " + std::to_string(line_no) + ": '" + field + "' is not a number");
  }
  return v;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kFormat, "dataset CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() < 2 || header.back() != "v") {
    throw Error(ErrorCode::kFormat, "dataset CSV header must be x0,...,x{n-1},v");
  }
  const std::size_t n = header.size() - 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (header[j] != "x" + std::to_string(j)) {
      throw Error(ErrorCode::kFormat, "dataset CSV header column " + std::to_string(j) +
                                          " should be x" + std::to_string(j));
    }
  }
  std::vector<Sample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != n + 1) {
      throw Error(ErrorCode::kFormat, "line " + std::to_string(line_no) + ": expected " +
                                          std::to_string(n + 1) + " fields");
    }
    Sample s;
    s.x.reserve(n);
    for (std::size_t j = 0; j < n; ++j) s.x.push_back(parse_number(fields[j], line_no));
    s.v = parse_number(fields[n], line_no);
    samples.push_back(std::move(s));
  }
  return make_dataset(std::move(samples));
}

double AffineMap::operator()(double raw) const noexcept {
  const double span = raw_hi - raw_lo;
  if (span == 0.0) return exp_lo;
  return exp_lo + (raw - raw_lo) / span * (exp_hi - exp_lo);
}

EncoderConfig grid_encoder_config(std::size_t dim, std::span<const std::size_t> extents,
                                  ValueRange range, double position_span, double value_span,
                                  std::uint64_t seed) {
  EncoderConfig cfg;
  cfg.dim = dim;
  cfg.seed = seed;
  for (std::size_t extent : extents) {
    const double hi = extent > 1 ? static_cast<double>(extent - 1) : 1.0;
    cfg.axes.push_back({0.0, hi, 0.0, position_span});
  }
  cfg.value = {range.lo, range.hi, 0.0, value_span};
  return cfg;
}

SpatialEncoder::SpatialEncoder(std::shared_ptr<const Backend> backend, EncoderConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {
  if (!backend_) throw Error(ErrorCode::kInvalidArgument, "encoder needs a backend");
  if (config_.axes.empty()) throw Error(ErrorCode::kInvalidArgument, "encoder needs n >= 1 axes");
  if (config_.value.raw_lo > config_.value.raw_hi) {
    throw Error(ErrorCode::kInvalidArgument, "value range is inverted");
  }
  // Stream 0 seeds the value base; stream j + 1 seeds axis j.
  const Rng root(config_.seed);
  Rng value_rng = root.fork(0);
  value_base_ = backend_->sample_base(value_rng, config_.dim);
  for (std::size_t j = 0; j < config_.axes.size(); ++j) {
    Rng axis_rng = root.fork(j + 1);
    axis_bases_.push_back(backend_->sample_base(axis_rng, config_.dim));
  }
}

Hypervector encode_position(const SpatialEncoder& enc, std::span<const double> x) {
  if (x.size() != enc.n()) {
    throw Error(ErrorCode::kDimMismatch, "coordinate has " + std::to_string(x.size()) +
                                             " components, encoder expects " +
                                             std::to_string(enc.n()));
  }
  for (double c : x) require_finite(c, "coordinate");
  const auto& backend = enc.backend();
  Hypervector p = backend.encode(enc.axis_base(0), enc.config().axes[0](x[0]));
  for (std::size_t j = 1; j < x.size(); ++j) {
    p = backend.bind(p, backend.encode(enc.axis_base(j), enc.config().axes[j](x[j])));
  }
  return p;
}

std::vector<Hypervector> encode_positions(const SpatialEncoder& enc,
                                          std::span<const std::vector<double>> xs) {
  const auto& backend = enc.backend();
  std::vector<Hypervector> out;
  std::vector<double> exponents(xs.size());
  for (std::size_t j = 0; j < enc.n(); ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i].size() != enc.n()) throw Error(ErrorCode::kDimMismatch, "coordinate arity mismatch");
      require_finite(xs[i][j], "coordinate");
      exponents[i] = enc.config().axes[j](xs[i][j]);
    }
    auto axis = backend.encode_batch(enc.axis_base(j), exponents);
    if (j == 0) {
      out = std::move(axis);
    } else {
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] = backend.bind(out[i], axis[i]);
    }
  }
  return out;
}

namespace {

double clamp_value(const SpatialEncoder& enc, double v, EncodeDiagnostics* diag) {
  require_finite(v, "value");
  const ValueRange range = enc.value_range();
  if (v >= range.lo && v <= range.hi) return v;
  const double clamped = std::clamp(v, range.lo, range.hi);
  if (diag) ++diag->clamped_values;
  std::cerr << "hyperspace: warning: value " << v << " outside [" << range.lo << ", " << range.hi
            << "], clamped to " << clamped << '\n';
  return clamped;
}

}  // namespace

Hypervector encode_value(const SpatialEncoder& enc, double v, EncodeDiagnostics* diag) {
  const double clamped = clamp_value(enc, v, diag);
  return enc.backend().encode(enc.value_base(), enc.config().value(clamped));
}

std::vector<Hypervector> encode_values(const SpatialEncoder& enc, std::span<const double> vs,
                                       EncodeDiagnostics* diag) {
  std::vector<double> exponents(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    exponents[i] = enc.config().value(clamp_value(enc, vs[i], diag));
  }
  return enc.backend().encode_batch(enc.value_base(), exponents);
}

MemoryVector::MemoryVector(BackendTag tag, std::size_t dim) : m_(Hypervector::zeros(tag, dim)) {}

const Hypervector& MemoryVector::normalized(const Backend& backend) {
  if (count_ == 0) throw Error(ErrorCode::kEmptyMemory, "memory holds no pairs");
  if (!normalized_) normalized_ = backend.normalize(*m_);
  return *normalized_;
}

const Hypervector& MemoryVector::cached_normalized() const {
  if (!normalized_) throw Error(ErrorCode::kInvalidArgument, "normalized memory is not cached");
  return *normalized_;
}

MemoryVector store(const Backend& backend, MemoryVector mem, const Hypervector& p,
                   const Hypervector& vv) {
  require_compatible(p, vv);
  if (!mem.m_) {
    mem.m_ = Hypervector::zeros(p.tag(), p.dim());
  }
  require_compatible(*mem.m_, p);
  mem.m_ = backend.bundle(*mem.m_, backend.bind(p, vv));
  ++mem.count_;
  mem.normalized_.reset();
  return mem;
}

Hypervector unbind_position(const MemoryVector& mem, const Backend& backend,
                            const Hypervector& position, QueryOptions options) {
  if (mem.count() == 0 || !mem.m()) throw Error(ErrorCode::kEmptyMemory, "memory holds no pairs");
  const Hypervector& source = options.normalize_memory ? mem.cached_normalized() : *mem.m();
  return backend.bind(source, backend.invert(position));
}

Hypervector query_prepared(const MemoryVector& mem, const SpatialEncoder& enc,
                           std::span<const double> x_q, QueryOptions options) {
  if (mem.count() == 0) throw Error(ErrorCode::kEmptyMemory, "memory holds no pairs");
  return unbind_position(mem, enc.backend(), encode_position(enc, x_q), options);
}

Hypervector query(MemoryVector& mem, const SpatialEncoder& enc, std::span<const double> x_q,
                  QueryOptions options) {
  if (mem.count() == 0) throw Error(ErrorCode::kEmptyMemory, "memory holds no pairs");
  if (options.normalize_memory) mem.normalized(enc.backend());
  return query_prepared(mem, enc, x_q, options);
}

}  // namespace hyperspace
