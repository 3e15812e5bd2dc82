#pragma once

#include <cstdint>
#include <random>

namespace hyperspace {

// Repo-wide pseudorandom source.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The distribution layer is implemented here (the standard library
// distributions are implementation-defined), so a seed reproduces the same
// stream on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n);

  // Independent child stream. The child seed is a SplitMix64 hash of
  // (seed, stream), so forks never depend on how much of this stream has
  // been consumed.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace hyperspace
