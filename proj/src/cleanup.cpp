#include "hyperspace/cleanup.hpp"

#include <cmath>
#include <string>

#include "hyperspace/error.hpp"

namespace hyperspace {

Codebook build_codebook(const SpatialEncoder& enc, std::size_t k) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "codebook needs k >= 2");
  Codebook cb;
  cb.range = enc.value_range();
  if (!(cb.range.hi > cb.range.lo)) {
    throw Error(ErrorCode::kInvalidArgument, "codebook needs a non-empty value range");
  }
  cb.values.resize(k);
  const double span = cb.range.hi - cb.range.lo;
  for (std::size_t i = 0; i < k; ++i) {
    cb.values[i] = cb.range.lo + static_cast<double>(i) * span / static_cast<double>(k - 1);
  }
  cb.values.back() = cb.range.hi;
  cb.entries = encode_values(enc, cb.values);
  return cb;
}

std::string_view to_string(CleanupMethod m) noexcept {
  switch (m) {
    case CleanupMethod::kNone: return "none";
    case CleanupMethod::kResonator: return "resonator";
    case CleanupMethod::kHopfield: return "hopfield";
  }
  return "unknown";
}

CleanupMethod parse_cleanup(std::string_view name) {
  if (name == "none") return CleanupMethod::kNone;
  if (name == "resonator") return CleanupMethod::kResonator;
  if (name == "hopfield") return CleanupMethod::kHopfield;
  throw Error(ErrorCode::kInvalidArgument, "unknown cleanup method '" + std::string(name) + "'");
}

void validate(const CleanupConfig& cfg) {
  if (cfg.timesteps < 1) throw Error(ErrorCode::kInvalidArgument, "cleanup timesteps must be >= 1");
  if (!(cfg.beta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "cleanup beta must be > 0");
  if (!(cfg.convergence_tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cleanup tolerance must be >= 0");
  }
}

std::vector<double> codebook_similarities(const Backend& backend, const Hypervector& y,
                                          const Codebook& cb) {
  std::vector<double> sims(cb.k());
  for (std::size_t i = 0; i < cb.k(); ++i) sims[i] = backend.similarity(y, cb.entries[i]);
  return sims;
}

Hypervector resonator_step(const Backend& backend, const Hypervector& y, const Codebook& cb,
                           bool normalize) {
  const auto sims = codebook_similarities(backend, y, cb);
  Hypervector acc = backend.weighted_sum(cb.entries, sims);
  return normalize ? backend.normalize(acc) : acc;
}

// beta = 0 is accepted here (uniform weights); CleanupConfig requires beta > 0.
Hypervector hopfield_step(const Backend& backend, const Hypervector& y, const Codebook& cb,
                          double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::kInvalidArgument, "Hopfield beta must be finite and >= 0");
  }
  auto logits = codebook_similarities(backend, y, cb);
  for (auto& l : logits) l *= beta;
  const auto weights = backend.softmax(logits);
  return backend.normalize(backend.weighted_sum(cb.entries, weights));
}

CleanupResult run_cleanup(const Backend& backend, const Hypervector& y, const Codebook& cb,
                          const CleanupConfig& cfg) {
  if (cfg.method == CleanupMethod::kNone) return {y, 0, false};
  validate(cfg);
  CleanupResult result{y, 0, false};
  for (int t = 0; t < cfg.timesteps; ++t) {
    Hypervector next = cfg.method == CleanupMethod::kHopfield
                           ? hopfield_step(backend, result.y, cb, cfg.beta)
                           : resonator_step(backend, result.y, cb, cfg.normalize);
    ++result.iterations;
    const auto a = next.raw();
    const auto b = result.y.raw();
    double delta = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) delta += (a[i] - b[i]) * (a[i] - b[i]);
    result.y = std::move(next);
    if (std::sqrt(delta) < cfg.convergence_tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

std::size_t argmax_entry(std::span<const double> similarities) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < similarities.size(); ++i) {
    if (similarities[i] > similarities[best]) best = i;
  }
  return best;
}

}  // namespace hyperspace
