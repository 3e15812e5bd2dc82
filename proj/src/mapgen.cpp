#include "hyperspace/mapgen.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hyperspace/error.hpp"

namespace hyperspace {

std::vector<Point2> sample_control_points(Rng& rng, std::size_t width, std::size_t height) {
  if (width < 3 || height < 3) throw Error(ErrorCode::kInvalidArgument, "map must be at least 3x3");
  const double gx = static_cast<double>(width - 1);
  const double gy = static_cast<double>(height - 1);
  std::vector<Point2> pts(kControlPoints);
  pts.front() = {0.0, 0.0};
  pts.back() = {gx, gy};
  // Interior points sit on the start-goal diagonal at their knot fraction and
  // are jittered by up to a quarter of the map, kept strictly inside.
  for (std::size_t i = 1; i + 1 < kControlPoints; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(kControlPoints - 1);
    const double jx = rng.uniform(-0.25, 0.25) * gx;
    const double jy = rng.uniform(-0.25, 0.25) * gy;
    pts[i] = {std::clamp(frac * gx + jx, 1.0, gx - 1.0), std::clamp(frac * gy + jy, 1.0, gy - 1.0)};
  }
  return pts;
}

// Natural boundary conditions (M_0 = M_{n-1} = 0), unit knot spacing; the
// second derivatives solve the tridiagonal system M_{i-1} + 4 M_i + M_{i+1} =
// 6 (y_{i+1} - 2 y_i + y_{i-1}) by the Thomas algorithm.
NaturalSpline fit_natural_spline(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "spline needs at least two knots");
  std::vector<double> m(n, 0.0);
  if (n > 2) {
    const std::size_t inner = n - 2;
    std::vector<double> diag(inner, 4.0), rhs(inner);
    for (std::size_t i = 0; i < inner; ++i) rhs[i] = 6.0 * (y[i + 2] - 2.0 * y[i + 1] + y[i]);
    for (std::size_t i = 1; i < inner; ++i) {
      const double f = 1.0 / diag[i - 1];
      diag[i] -= f;
      rhs[i] -= f * rhs[i - 1];
    }
    m[inner] = rhs[inner - 1] / diag[inner - 1];
    for (std::size_t i = inner - 1; i-- > 0;) m[i + 1] = (rhs[i] - m[i + 2]) / diag[i];
  }
  NaturalSpline s;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    s.a.push_back(y[i]);
    s.b.push_back(y[i + 1] - y[i] - (2.0 * m[i] + m[i + 1]) / 6.0);
    s.c.push_back(m[i] / 2.0);
    s.d.push_back((m[i + 1] - m[i]) / 6.0);
  }
  // Terminal knot value kept exactly so evaluation at t = n-1 reproduces it.
  s.a.push_back(y[n - 1]);
  return s;
}

double NaturalSpline::operator()(double t) const {
  const std::size_t segments = b.size();
  if (t <= 0.0) return a.front();
  if (t >= static_cast<double>(segments)) return a.back();
  const auto i = std::min(static_cast<std::size_t>(t), segments - 1);
  const double dt = t - static_cast<double>(i);
  if (dt == 0.0) return a[i];
  return a[i] + dt * (b[i] + dt * (c[i] + dt * d[i]));
}

std::vector<Point2> spline_path(std::span<const Point2> ctrl, std::size_t samples) {
  if (ctrl.size() != kControlPoints) {
    throw Error(ErrorCode::kInvalidArgument, "spline path needs exactly 7 control points");
  }
  if (samples < 2) throw Error(ErrorCode::kInvalidArgument, "spline path needs >= 2 samples");
  for (std::size_t i = 0; i + 1 < ctrl.size(); ++i) {
    if (std::hypot(ctrl[i + 1].x - ctrl[i].x, ctrl[i + 1].y - ctrl[i].y) < 1e-12) {
      throw Error(ErrorCode::kDegenerateSpline,
                  "control points " + std::to_string(i) + " and " + std::to_string(i + 1) + " coincide");
    }
  }
  std::vector<double> xs, ys;
  for (const auto& p : ctrl) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const auto sx = fit_natural_spline(xs);
  const auto sy = fit_natural_spline(ys);
  const double t_max = static_cast<double>(ctrl.size() - 1);
  std::vector<Point2> path(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
    path[k] = {sx(t), sy(t)};
  }
  return path;
}

namespace {

double nearest_distance(std::span<const Point2> path, double cx, double cy) noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : path) {
    const double dx = cx - p.x;
    const double dy = cy - p.y;
    best = std::min(best, dx * dx + dy * dy);
  }
  return std::sqrt(best);
}

}  // namespace

double cost_at(std::span<const Point2> path, Point2 p) {
  if (path.empty()) throw Error(ErrorCode::kEmptyPath, "path has no samples");
  return kPathCost + nearest_distance(path, p.x, p.y);
}

std::vector<double> distance_field(std::span<const Point2> path, std::size_t width,
                                   std::size_t height, Exec exec) {
  if (path.empty()) throw Error(ErrorCode::kEmptyPath, "path has no samples");
  std::vector<double> costs(width * height);
  const auto rows = static_cast<long>(height);
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (long r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        costs[static_cast<std::size_t>(r) * width + c] =
            kPathCost + nearest_distance(path, static_cast<double>(c), static_cast<double>(r));
      }
    }
  } else {
    for (long r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        costs[static_cast<std::size_t>(r) * width + c] =
            kPathCost + nearest_distance(path, static_cast<double>(c), static_cast<double>(r));
      }
    }
  }
  return costs;
}

CostMap distance_transform(std::span<const Point2> path, std::size_t width, std::size_t height,
                           Exec exec) {
  CostMap map;
  map.width = width;
  map.height = height;
  map.costs = distance_field(path, width, height, exec);
  map.path.assign(path.begin(), path.end());
  return map;
}

CostMap generate_map(std::uint64_t seed, std::size_t width, std::size_t height, Exec exec) {
  Rng rng = Rng(seed).fork(0x6D6170);  // "map"
  auto ctrl = sample_control_points(rng, width, height);
  auto path = spline_path(ctrl);
  CostMap map = distance_transform(path, width, height, exec);
  map.control_points = std::move(ctrl);
  map.seed = seed;
  return map;
}

MapDataset to_dataset(const CostMap& map, bool normalize) {
  MapDataset out;
  out.normalized = normalize;
  const auto [lo, hi] = std::minmax_element(map.costs.begin(), map.costs.end());
  if (normalize) {
    out.normalization.offset = *lo;
    out.normalization.scale = *hi > *lo ? *hi - *lo : 1.0;
  }
  std::vector<Sample> samples;
  samples.reserve(map.costs.size());
  for (std::size_t r = 0; r < map.height; ++r) {
    for (std::size_t c = 0; c < map.width; ++c) {
      const double raw = map.at(c, r);
      samples.push_back({{static_cast<double>(c), static_cast<double>(r)},
                         normalize ? out.normalization.apply(raw) : raw});
    }
  }
  out.data = make_dataset(std::move(samples));
  if (normalize) out.data.value_range = {0.0, 1.0};
  return out;
}

void write_map_sidecar_json(std::ostream& out, const CostMap& map, const MapDataset& ds) {
  nlohmann::ordered_json j;
  j["seed"] = map.seed;
  j["width"] = map.width;
  j["height"] = map.height;
  auto& ctrl = j["control_points"] = nlohmann::ordered_json::array();
  for (const auto& p : map.control_points) ctrl.push_back({p.x, p.y});
  j["normalization"] = {{"enabled", ds.normalized},
                        {"offset", ds.normalization.offset},
                        {"scale", ds.normalization.scale}};
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed to write map sidecar");
}

void write_map_ppm(std::ostream& out, const CostMap& map) {
  const auto [lo, hi] = std::minmax_element(map.costs.begin(), map.costs.end());
  const double span = *hi > *lo ? *hi - *lo : 1.0;
  out << "P6\n" << map.width << ' ' << map.height << "\n255\n";
  for (double c : map.costs) {
    const auto g = static_cast<unsigned char>(std::lround(255.0 * (1.0 - (c - *lo) / span)));
    out.put(static_cast<char>(g)).put(static_cast<char>(g)).put(static_cast<char>(g));
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write PPM");
}

}  // namespace hyperspace
