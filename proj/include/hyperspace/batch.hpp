#pragma once

// Batched pipeline stages over many query points. The serial path is the
// reference; the OpenMP path splits the independent per-query work across
// threads and must agree with it element for element.

#include <exception>
#include <mutex>
#include <span>
#include <vector>

#include "hyperspace/cleanup.hpp"
#include "hyperspace/kernels.hpp"
#include "hyperspace/regression.hpp"
#include "hyperspace/spatial.hpp"

namespace hyperspace {

// Runs fn(i) for i in [0, n). Exceptions raised on worker threads are
// captured and the first one is rethrown on the caller.
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::kSerial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(worker_threads())
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// Positional inversion at every query point. Normalizes the memory once.
std::vector<Hypervector> query_batch(MemoryVector& mem, const SpatialEncoder& enc,
                                     std::span<const std::vector<double>> points, Exec exec,
                                     QueryOptions options = {});

std::vector<CleanupResult> cleanup_batch(const Backend& backend, std::span<const Hypervector> ys,
                                         const Codebook& cb, const CleanupConfig& cfg, Exec exec);

std::vector<double> decode_codebook_batch(const Backend& backend, std::span<const Hypervector> ys,
                                          const Codebook& cb, double beta, Exec exec);

std::vector<double> decode_mlp_batch(const MlpDecoder& dec, std::span<const Hypervector> ys,
                                     Exec exec);

}  // namespace hyperspace
