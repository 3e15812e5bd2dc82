#pragma once

// The abstract operator contract every VSA backend satisfies:
//   E (encode), bind, bundle, S (similarity), I (invert), N (normalize),
//   weight, and the softmax normalizer used by Hopfield cleanup.
// Higher layers (spatial pipeline, cleanup, regression) are written against
// this interface only.

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hyperspace/hypervector.hpp"
#include "hyperspace/rng.hpp"

namespace hyperspace {

enum class Op : std::uint8_t {
  kEncode,
  kBind,
  kBundle,
  kSimilarity,
  kInvert,
  kNormalize,
  kWeight,
  kSoftmax,
};
inline constexpr std::size_t kOpCount = 8;
std::string_view to_string(Op op) noexcept;

// Plain tally of abstract operations.
struct OpCounts {
  std::array<std::uint64_t, kOpCount> n{};

  std::uint64_t operator[](Op op) const noexcept { return n[static_cast<std::size_t>(op)]; }
  std::uint64_t& operator[](Op op) noexcept { return n[static_cast<std::size_t>(op)]; }
  std::uint64_t total() const noexcept;

  OpCounts operator-(const OpCounts& rhs) const noexcept;
  OpCounts& operator+=(const OpCounts& rhs) noexcept;
  bool operator==(const OpCounts&) const = default;
};

class Backend {
 public:
  virtual ~Backend() = default;

  virtual BackendTag tag() const noexcept = 0;
  virtual BaseVector sample_base(Rng& rng, std::size_t dim) const = 0;

  virtual Hypervector encode(const BaseVector& base, double x) const = 0;
  // Batched encode; backends may share per-base work across the batch.
  virtual std::vector<Hypervector> encode_batch(const BaseVector& base,
                                                std::span<const double> xs) const;
  virtual Hypervector bind(const Hypervector& a, const Hypervector& b) const = 0;
  virtual Hypervector invert(const Hypervector& a) const = 0;

  // Element-wise operations are identical for both backends over the flat
  // double view, so they have shared default implementations.
  virtual Hypervector bundle(const Hypervector& a, const Hypervector& b) const;
  virtual double similarity(const Hypervector& a, const Hypervector& b) const;
  virtual Hypervector normalize(const Hypervector& a) const;
  virtual Hypervector weight(const Hypervector& a, double w) const;
  virtual std::vector<double> softmax(std::span<const double> logits) const;

  // acc <- acc (+) (a weight w), fused in place. Counts as one weight and one
  // bundle; weighted_sum relies on this to keep the abstract-op tally exact.
  virtual void accumulate_weighted(Hypervector& acc, const Hypervector& a, double w) const;

  // sum_i entries[i] weight ws[i]: k weights and k-1 bundles.
  Hypervector weighted_sum(std::span<const Hypervector> entries, std::span<const double> ws) const;
};

// Decorator that forwards to another backend and tallies every abstract
// operation. Counters are atomic so batched kernels may run concurrently.
class CountingBackend final : public Backend {
 public:
  explicit CountingBackend(std::shared_ptr<const Backend> inner);

  BackendTag tag() const noexcept override { return inner_->tag(); }
  BaseVector sample_base(Rng& rng, std::size_t dim) const override;
  Hypervector encode(const BaseVector& base, double x) const override;
  std::vector<Hypervector> encode_batch(const BaseVector& base,
                                        std::span<const double> xs) const override;
  Hypervector bind(const Hypervector& a, const Hypervector& b) const override;
  Hypervector invert(const Hypervector& a) const override;
  Hypervector bundle(const Hypervector& a, const Hypervector& b) const override;
  double similarity(const Hypervector& a, const Hypervector& b) const override;
  Hypervector normalize(const Hypervector& a) const override;
  Hypervector weight(const Hypervector& a, double w) const override;
  std::vector<double> softmax(std::span<const double> logits) const override;
  void accumulate_weighted(Hypervector& acc, const Hypervector& a, double w) const override;

  OpCounts counts() const noexcept;
  void reset() noexcept;

 private:
  void tick(Op op, std::uint64_t n = 1) const noexcept {
    counters_[static_cast<std::size_t>(op)].fetch_add(n, std::memory_order_relaxed);
  }

  std::shared_ptr<const Backend> inner_;
  mutable std::array<std::atomic<std::uint64_t>, kOpCount> counters_{};
};

std::shared_ptr<const Backend> make_backend(BackendTag tag);

// Shared element-wise kernels over the flat double view.
double dot_raw(std::span<const double> a, std::span<const double> b) noexcept;
double norm2(const Hypervector& a) noexcept;

}  // namespace hyperspace
