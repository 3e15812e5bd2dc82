#include "hyperspace/backend.hpp"

#include <algorithm>
#include <cmath>

#include "hyperspace/error.hpp"
#include "hyperspace/fhrr.hpp"
#include "hyperspace/hrr.hpp"

namespace hyperspace {

std::string_view to_string(Op op) noexcept {
  switch (op) {
    case Op::kEncode: return "encode";
    case Op::kBind: return "bind";
    case Op::kBundle: return "bundle";
    case Op::kSimilarity: return "similarity";
    case Op::kInvert: return "invert";
    case Op::kNormalize: return "normalize";
    case Op::kWeight: return "weight";
    case Op::kSoftmax: return "softmax";
  }
  return "unknown";
}

std::uint64_t OpCounts::total() const noexcept {
  std::uint64_t t = 0;
  for (auto x : n) t += x;
  return t;
}

OpCounts OpCounts::operator-(const OpCounts& rhs) const noexcept {
  OpCounts out;
  for (std::size_t i = 0; i < kOpCount; ++i) out.n[i] = n[i] - rhs.n[i];
  return out;
}

OpCounts& OpCounts::operator+=(const OpCounts& rhs) noexcept {
  for (std::size_t i = 0; i < kOpCount; ++i) n[i] += rhs.n[i];
  return *this;
}

double dot_raw(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const Hypervector& a) noexcept {
  const auto raw = a.raw();
  return std::sqrt(dot_raw(raw, raw));
}

std::vector<Hypervector> Backend::encode_batch(const BaseVector& base,
                                               std::span<const double> xs) const {
  std::vector<Hypervector> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(encode(base, x));
  return out;
}

Hypervector Backend::bundle(const Hypervector& a, const Hypervector& b) const {
  require_compatible(a, b);
  Hypervector out = a;
  auto dst = out.raw_mut();
  const auto src = b.raw();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

// Real part of the Hermitian inner product over the product of norms. For
// FHRR, Re(sum a_j conj(b_j)) = sum (re_a re_b + im_a im_b), which is exactly
// the dot product of the flat views.
double Backend::similarity(const Hypervector& a, const Hypervector& b) const {
  require_compatible(a, b);
  const auto ra = a.raw();
  const auto rb = b.raw();
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ab += ra[i] * rb[i];
    aa += ra[i] * ra[i];
    bb += rb[i] * rb[i];
  }
  if (aa < 1e-24 || bb < 1e-24) throw Error(ErrorCode::kZeroVector, "similarity of a zero vector");
  return ab / std::sqrt(aa * bb);
}

Hypervector Backend::normalize(const Hypervector& a) const {
  const double n = norm2(a);
  if (n < 1e-12) throw Error(ErrorCode::kZeroVector, "cannot normalize a zero vector");
  Hypervector out = a;
  const double inv = 1.0 / n;
  for (auto& x : out.raw_mut()) x *= inv;
  return out;
}

Hypervector Backend::weight(const Hypervector& a, double w) const {
  if (!std::isfinite(w)) throw Error(ErrorCode::kInvalidScalar, "weight is not finite");
  Hypervector out = a;
  for (auto& x : out.raw_mut()) x *= w;
  return out;
}

std::vector<double> Backend::softmax(std::span<const double> logits) const {
  if (logits.empty()) throw Error(ErrorCode::kInvalidArgument, "softmax of no logits");
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (auto& w : out) w /= total;
  return out;
}

void Backend::accumulate_weighted(Hypervector& acc, const Hypervector& a, double w) const {
  require_compatible(acc, a);
  if (!std::isfinite(w)) throw Error(ErrorCode::kInvalidScalar, "weight is not finite");
  auto dst = acc.raw_mut();
  const auto src = a.raw();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += w * src[i];
}

Hypervector Backend::weighted_sum(std::span<const Hypervector> entries,
                                  std::span<const double> ws) const {
  if (entries.empty() || entries.size() != ws.size()) {
    throw Error(ErrorCode::kInvalidArgument, "weighted_sum needs one weight per entry");
  }
  Hypervector acc = weight(entries[0], ws[0]);
  for (std::size_t i = 1; i < entries.size(); ++i) accumulate_weighted(acc, entries[i], ws[i]);
  return acc;
}

CountingBackend::CountingBackend(std::shared_ptr<const Backend> inner) : inner_(std::move(inner)) {
  if (!inner_) throw Error(ErrorCode::kInvalidArgument, "CountingBackend needs a backend");
}

BaseVector CountingBackend::sample_base(Rng& rng, std::size_t dim) const {
  return inner_->sample_base(rng, dim);
}

Hypervector CountingBackend::encode(const BaseVector& base, double x) const {
  tick(Op::kEncode);
  return inner_->encode(base, x);
}

std::vector<Hypervector> CountingBackend::encode_batch(const BaseVector& base,
                                                       std::span<const double> xs) const {
  tick(Op::kEncode, xs.size());
  return inner_->encode_batch(base, xs);
}

Hypervector CountingBackend::bind(const Hypervector& a, const Hypervector& b) const {
  tick(Op::kBind);
  return inner_->bind(a, b);
}

Hypervector CountingBackend::invert(const Hypervector& a) const {
  tick(Op::kInvert);
  return inner_->invert(a);
}

Hypervector CountingBackend::bundle(const Hypervector& a, const Hypervector& b) const {
  tick(Op::kBundle);
  return inner_->bundle(a, b);
}

double CountingBackend::similarity(const Hypervector& a, const Hypervector& b) const {
  tick(Op::kSimilarity);
  return inner_->similarity(a, b);
}

Hypervector CountingBackend::normalize(const Hypervector& a) const {
  tick(Op::kNormalize);
  return inner_->normalize(a);
}

Hypervector CountingBackend::weight(const Hypervector& a, double w) const {
  tick(Op::kWeight);
  return inner_->weight(a, w);
}

std::vector<double> CountingBackend::softmax(std::span<const double> logits) const {
  tick(Op::kSoftmax);
  return inner_->softmax(logits);
}

void CountingBackend::accumulate_weighted(Hypervector& acc, const Hypervector& a, double w) const {
  tick(Op::kWeight);
  tick(Op::kBundle);
  inner_->accumulate_weighted(acc, a, w);
}

OpCounts CountingBackend::counts() const noexcept {
  OpCounts out;
  for (std::size_t i = 0; i < kOpCount; ++i) out.n[i] = counters_[i].load(std::memory_order_relaxed);
  return out;
}

void CountingBackend::reset() noexcept {
  for (auto& c : counters_) c.store(0, std::memory_order_relaxed);
}

std::shared_ptr<const Backend> make_backend(BackendTag tag) {
  if (tag == BackendTag::kHrr) return std::make_shared<const HrrBackend>();
  return std::make_shared<const FhrrBackend>();
}

}  // namespace hyperspace
