#include "hyperspace/kernels.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hyperspace/batch.hpp"
#include "hyperspace/error.hpp"

namespace hyperspace {

std::string_view to_string(Exec e) noexcept { return e == Exec::kSerial ? "serial" : "parallel"; }

Exec parse_exec(std::string_view name) {
  if (name == "serial") return Exec::kSerial;
  if (name == "parallel" || name == "openmp") return Exec::kParallel;
  throw Error(ErrorCode::kInvalidArgument, "unknown execution mode '" + std::string(name) + "'");
}

bool openmp_enabled() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int worker_threads() noexcept {
  if (const char* env = std::getenv("HYPERSPACE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<Hypervector> query_batch(MemoryVector& mem, const SpatialEncoder& enc,
                                     std::span<const std::vector<double>> points, Exec exec,
                                     QueryOptions options) {
  if (mem.count() == 0) throw Error(ErrorCode::kEmptyMemory, "memory holds no pairs");
  if (options.normalize_memory) mem.normalized(enc.backend());
  const MemoryVector& shared = mem;
  std::vector<Hypervector> out(points.size());
  if (exec == Exec::kSerial) {
    // One batched encode per axis shares the per-base transform work.
    const auto positions = encode_positions(enc, points);
    for (std::size_t i = 0; i < points.size(); ++i) {
      out[i] = unbind_position(shared, enc.backend(), positions[i], options);
    }
    return out;
  }
  for_each_index(points.size(), exec, [&](std::size_t i) {
    out[i] = query_prepared(shared, enc, points[i], options);
  });
  return out;
}

std::vector<CleanupResult> cleanup_batch(const Backend& backend, std::span<const Hypervector> ys,
                                         const Codebook& cb, const CleanupConfig& cfg, Exec exec) {
  std::vector<CleanupResult> out(ys.size());
  for_each_index(ys.size(), exec, [&](std::size_t i) { out[i] = run_cleanup(backend, ys[i], cb, cfg); });
  return out;
}

std::vector<double> decode_codebook_batch(const Backend& backend, std::span<const Hypervector> ys,
                                          const Codebook& cb, double beta, Exec exec) {
  std::vector<double> out(ys.size());
  for_each_index(ys.size(), exec, [&](std::size_t i) { out[i] = decode_codebook(backend, ys[i], cb, beta); });
  return out;
}

std::vector<double> decode_mlp_batch(const MlpDecoder& dec, std::span<const Hypervector> ys,
                                     Exec exec) {
  std::vector<double> out(ys.size());
  for_each_index(ys.size(), exec, [&](std::size_t i) { out[i] = decode_mlp(dec, ys[i]); });
  return out;
}

}  // namespace hyperspace
