#pragma once

// Seeded end-to-end runs over the {backend x cleanup x regression} grid with
// per-stage wall-clock timing, abstract-operation counts, and MSE.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hyperspace/backend.hpp"
#include "hyperspace/cleanup.hpp"
#include "hyperspace/kernels.hpp"
#include "hyperspace/regression.hpp"

namespace hyperspace {

struct MapConfig {
  std::size_t width = 28;
  std::size_t height = 28;
};

struct RunConfig {
  BackendTag backend = BackendTag::kHrr;
  std::size_t dim = 8192;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  CleanupConfig cleanup;
  RegressionConfig regression;
  MapConfig map;
  std::size_t codebook_k = 65;
  double position_span = 6.0;  // grid extent -> exponents [0, span]
  double value_span = 64.0;    // value range -> exponents [0, span]
  bool normalize_values = true;
  Exec exec = Exec::kSerial;
  bool warmup = true;
};

void validate(const RunConfig& cfg);

// Flat "key = value" text; '#' starts a comment; "[section]" lines prefix the
// keys that follow with "section.". Unknown keys are errors. Missing keys keep
// the defaults above.
RunConfig parse_run_config(std::istream& in, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});
// Every key with its current value, in the accepted syntax.
std::string describe_run_config(const RunConfig& cfg);

// "hrr_hopfield_codebook" style cell name.
std::string config_label(const RunConfig& cfg);
// Label plus every parameter that changes the result.
std::string config_fingerprint(const RunConfig& cfg);

enum class Stage : std::uint8_t {
  kPositionalEncoding,
  kValueEncoding,
  kMemoryStorage,
  kPositionalInversion,
  kCleanup,
  kRegression,
};
inline constexpr std::size_t kStageCount = 6;
std::string_view to_string(Stage s) noexcept;
inline constexpr std::array<Stage, kStageCount> kStages{
    Stage::kPositionalEncoding, Stage::kValueEncoding, Stage::kMemoryStorage,
    Stage::kPositionalInversion, Stage::kCleanup,       Stage::kRegression};

struct BenchRecord {
  std::string label;
  std::string fingerprint;
  BackendTag backend = BackendTag::kHrr;
  CleanupMethod cleanup = CleanupMethod::kNone;
  RegressionMethod regression = RegressionMethod::kCodebook;
  std::size_t dim = 0;
  std::size_t codebook_k = 0;
  int timesteps = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";

  std::array<double, kStageCount> stage_seconds{};
  std::array<OpCounts, kStageCount> stage_ops{};
  OpCounts setup_ops;  // base sampling and codebook construction
  double train_seconds = 0.0;

  double mse = 0.0;        // normalized units when values are normalized
  double train_mse = 0.0;  // final training loss of the neural decoder
  std::size_t samples = 0;
  std::size_t queries = 0;
  std::size_t cleanup_iterations = 0;
  std::size_t converged_queries = 0;
  std::size_t clamped_values = 0;
  std::size_t vector_payload_bytes = 0;
  std::size_t peak_vector_bytes = 0;

  // Row-major predictions and ground truth over the query grid.
  std::vector<double> predictions;
  std::vector<double> truth;
  std::size_t width = 0;
  std::size_t height = 0;

  bool ok() const noexcept { return status == "ok"; }
  double total_seconds() const noexcept;
  double seconds(Stage s) const noexcept { return stage_seconds[static_cast<std::size_t>(s)]; }
  const OpCounts& ops(Stage s) const noexcept { return stage_ops[static_cast<std::size_t>(s)]; }
};

// Generates the map for `seed`, stores every cell, queries every cell, cleans,
// regresses, and scores. Throws hyperspace::Error naming the failing stage.
BenchRecord run_pipeline(const RunConfig& cfg, std::uint64_t seed);

// backend {hrr, fhrr} x cleanup {none, resonator, hopfield} x regression
// {codebook, nn}, other parameters taken from `base`.
std::vector<RunConfig> default_grid(const RunConfig& base);

// One record per (cell, seed), in cell-then-seed order. Failures are recorded
// in the status field and the run continues. `threads` cells run at once.
std::vector<BenchRecord> run_grid(std::span<const RunConfig> cells, int threads = 1);

struct Aggregate {
  std::string label;
  std::string fingerprint;
  std::string backend;
  std::string cleanup;
  std::string regression;
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::array<double, kStageCount> mean_stage_seconds{};
  std::array<double, kStageCount> std_stage_seconds{};
  double mean_total_seconds = 0.0;
  double std_total_seconds = 0.0;
  double mean_train_seconds = 0.0;
  double mean_mse = 0.0;
  double std_mse = 0.0;
  bool pareto = false;
};

// Groups successful records by fingerprint, in first-appearance order, and
// marks Pareto membership.
std::vector<Aggregate> aggregate(std::span<const BenchRecord> records);

// Indices of points not dominated in (latency, mse), sorted by latency then
// index. Equal points do not dominate each other.
std::vector<std::size_t> pareto_frontier(std::span<const std::array<double, 2>> points);
std::vector<std::size_t> pareto_frontier(std::span<const Aggregate> cells);

void write_records_csv(std::ostream& out, std::span<const BenchRecord> records);
// Parses the columns written by write_records_csv (not the prediction grids).
std::vector<BenchRecord> read_records_csv(std::istream& in);
void write_aggregate_json(std::ostream& out, std::span<const Aggregate> cells);

// records.csv, aggregate.json, reconstruction_<label>_<seed>.csv, and
// ground_truth_<seed>.csv under out_dir.
void emit_reports(std::span<const BenchRecord> records, const std::filesystem::path& out_dir);

}  // namespace hyperspace
