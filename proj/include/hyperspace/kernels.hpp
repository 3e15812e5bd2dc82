#pragma once

// Batched data-parallel kernels. Each has a serial reference path and an
// OpenMP path; both produce identical results element for element.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hyperspace {

enum class Exec { kSerial, kParallel };
std::string_view to_string(Exec e) noexcept;
Exec parse_exec(std::string_view name);

// Threads used by Exec::kParallel: HYPERSPACE_THREADS if set, else the
// OpenMP default (1 when built without OpenMP).
int worker_threads() noexcept;
bool openmp_enabled() noexcept;

}  // namespace hyperspace
