#pragma once

// Synthetic cost maps: a natural cubic spline between opposing corners,
// densely sampled, and the exact distance field to those samples.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hyperspace/kernels.hpp"
#include "hyperspace/rng.hpp"
#include "hyperspace/spatial.hpp"

namespace hyperspace {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

inline constexpr std::size_t kControlPoints = 7;
inline constexpr std::size_t kPathSamples = 10000;
inline constexpr double kPathCost = 1.0;

struct CostMap {
  std::size_t width = 28;
  std::size_t height = 28;
  std::vector<double> costs;  // row-major, height x width
  std::vector<Point2> path;
  std::vector<Point2> control_points;
  std::uint64_t seed = 0;

  double at(std::size_t col, std::size_t row) const { return costs.at(row * width + col); }
};

// (0,0), five jittered interior points, (width-1, height-1).
std::vector<Point2> sample_control_points(Rng& rng, std::size_t width = 28, std::size_t height = 28);

// Natural cubic spline through the points against knots t = 0..n-1;
// returns `samples` points at uniformly spaced t in [0, n-1].
std::vector<Point2> spline_path(std::span<const Point2> ctrl, std::size_t samples = kPathSamples);

// Coefficients of a natural cubic spline over unit-spaced knots, exposed for
// tests. Segment i covers t in [i, i+1].
struct NaturalSpline {
  std::vector<double> a, b, c, d;
  double operator()(double t) const;
};
NaturalSpline fit_natural_spline(std::span<const double> knots_values);

// cost(cell) = 1 + min over path samples of the distance to the cell center
// (col, row). Exact; the parallel variant must match the serial reference.
std::vector<double> distance_field(std::span<const Point2> path, std::size_t width,
                                   std::size_t height, Exec exec = Exec::kSerial);
CostMap distance_transform(std::span<const Point2> path, std::size_t width = 28,
                           std::size_t height = 28, Exec exec = Exec::kSerial);

// Cost at an arbitrary point (used for off-grid ground truth).
double cost_at(std::span<const Point2> path, Point2 p);

CostMap generate_map(std::uint64_t seed, std::size_t width = 28, std::size_t height = 28,
                     Exec exec = Exec::kSerial);

// Min-max transform applied to costs before encoding.
struct Normalization {
  double offset = 0.0;  // raw minimum
  double scale = 1.0;   // raw maximum - raw minimum (1 if flat)
  double apply(double raw) const noexcept { return (raw - offset) / scale; }
  double invert(double normalized) const noexcept { return normalized * scale + offset; }
};

struct MapDataset {
  Dataset data;
  Normalization normalization;
  bool normalized = true;
};

// One sample per cell, x = (col, row), v = cost (optionally min-max normalized
// to [0, 1]).
MapDataset to_dataset(const CostMap& map, bool normalize = true);

void write_map_sidecar_json(std::ostream& out, const CostMap& map, const MapDataset& ds);
// Binary (P6) grayscale PPM of the cost field, bright = cheap.
void write_map_ppm(std::ostream& out, const CostMap& map);

}  // namespace hyperspace
