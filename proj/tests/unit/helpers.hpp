#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "hyperspace/error.hpp"
#include "hyperspace/hypervector.hpp"
#include "hyperspace/rng.hpp"

namespace testutil {

inline hyperspace::Hypervector random_real(hyperspace::Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return hyperspace::Hypervector::real(std::move(v));
}

inline hyperspace::Hypervector random_phasors(hyperspace::Rng& rng, std::size_t dim) {
  std::vector<hyperspace::Complex> v(dim);
  for (auto& z : v) z = std::polar(1.0, rng.uniform(-std::numbers::pi, std::numbers::pi));
  return hyperspace::Hypervector::complex(std::move(v));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double max_abs(std::span<const double> a) {
  double worst = 0.0;
  for (const double x : a) worst = std::max(worst, std::abs(x));
  return worst;
}

}  // namespace testutil
