#pragma once

// Codebook-driven iterative cleanup of noisy value vectors: resonator and
// modern-Hopfield dynamics.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hyperspace/backend.hpp"
#include "hyperspace/spatial.hpp"

namespace hyperspace {

// k value hypervectors at evenly spaced quantization levels.
struct Codebook {
  std::vector<Hypervector> entries;
  std::vector<double> values;  // strictly increasing
  ValueRange range;

  std::size_t k() const noexcept { return entries.size(); }
  double step() const noexcept { return (range.hi - range.lo) / static_cast<double>(k() - 1); }
};

// values_i = v_min + i (v_max - v_min)/(k-1), entries_i = encode_value(values_i).
Codebook build_codebook(const SpatialEncoder& enc, std::size_t k);

enum class CleanupMethod { kNone, kResonator, kHopfield };
std::string_view to_string(CleanupMethod m) noexcept;
CleanupMethod parse_cleanup(std::string_view name);

struct CleanupConfig {
  CleanupMethod method = CleanupMethod::kHopfield;
  int timesteps = 10;
  double beta = 20.0;
  double convergence_tol = 1e-6;
  // Outer N of the resonator update; the Hopfield update always normalizes.
  bool normalize = true;
};

void validate(const CleanupConfig& cfg);

// Similarity of y against every entry: k similarity ops.
std::vector<double> codebook_similarities(const Backend& backend, const Hypervector& y,
                                          const Codebook& cb);

// N( sum_i entries_i weight S(y, entries_i) ), raw (signed) similarity weights.
Hypervector resonator_step(const Backend& backend, const Hypervector& y, const Codebook& cb,
                           bool normalize = true);

// N( sum_i entries_i weight softmax(beta S(y, .))_i ).
Hypervector hopfield_step(const Backend& backend, const Hypervector& y, const Codebook& cb,
                          double beta);

struct CleanupResult {
  Hypervector y;
  int iterations = 0;  // steps actually executed
  bool converged = false;
};

// Applies the configured step until T steps have run or
// ||y_{t+1} - y_t|| < convergence_tol. kNone returns y untouched.
CleanupResult run_cleanup(const Backend& backend, const Hypervector& y, const Codebook& cb,
                          const CleanupConfig& cfg);

// Lowest index wins ties.
std::size_t argmax_entry(std::span<const double> similarities) noexcept;

}  // namespace hyperspace
