// hyperspace: map generation, single-configuration runs, the full benchmark
// grid, and Pareto summaries of existing results.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>

#include "hyperspace/bench.hpp"
#include "hyperspace/error.hpp"
#include "hyperspace/mapgen.hpp"

namespace fs = std::filesystem;
using namespace hyperspace;

namespace {

std::ofstream open_or_throw(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + p.string());
  return f;
}

void print_summary(std::span<const Aggregate> cells) {
  std::printf("%-28s %5s %12s %12s %12s %12s  %s\n", "config", "runs", "latency_s", "cleanup_s", "mse",
              "mse_std", "pareto");
  for (const auto& a : cells) {
    const double cleanup = a.mean_stage_seconds[static_cast<std::size_t>(Stage::kCleanup)];
    std::printf("%-28s %5zu %12.6f %12.6f %12.6g %12.6g  %s\n", a.label.c_str(), a.runs, a.mean_total_seconds,
                cleanup, a.mean_mse, a.std_mse, a.pareto ? "*" : "");
    if (a.failures) std::printf("  (%zu failed run%s)\n", a.failures, a.failures == 1 ? "" : "s");
  }
}

void report_failures(std::span<const BenchRecord> records) {
  for (const auto& r : records) {
    if (!r.ok()) std::fprintf(stderr, "failed: %s seed %llu: %s\n", r.label.c_str(),
                              static_cast<unsigned long long>(r.seed), r.status.c_str());
  }
}

std::vector<std::uint64_t> first_seeds(std::size_t n) {
  std::vector<std::uint64_t> seeds(n);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperdimensional spatial encoding benchmarks"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-map", "Generate a synthetic cost map");
  std::uint64_t gen_seed = 0;
  std::size_t gen_size = 28;
  std::string gen_out = "map.csv";
  std::string gen_ppm;
  bool gen_raw = false;
  gen->add_option("--seed", gen_seed, "Map seed");
  gen->add_option("--size", gen_size, "Grid side length")->check(CLI::Range(3, 4096));
  gen->add_option("--out", gen_out, "Output CSV (x0,x1,v); a .json sidecar is written next to it");
  gen->add_option("--ppm", gen_ppm, "Also write a grayscale PPM preview");
  gen->add_flag("--raw", gen_raw, "Keep raw costs instead of normalizing to [0,1]");

  auto* run = app.add_subcommand("run", "Run one configuration over its seeds");
  std::string run_config;
  std::string run_out = "results";
  int run_threads = 1;
  run->add_option("--config", run_config, "Config file (key = value)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--threads", run_threads, "Seeds run concurrently")->check(CLI::PositiveNumber);

  auto* bench = app.add_subcommand("bench", "Run the configuration grid");
  std::string bench_grid = "default";
  std::size_t bench_seeds = 5;
  std::size_t bench_dim = 8192;
  std::string bench_out = "results";
  std::string bench_config;
  int bench_threads = 1;
  bench->add_option("--grid", bench_grid, "Grid name")->check(CLI::IsMember({"default"}));
  bench->add_option("--seeds", bench_seeds, "Seeds 0..n-1")->check(CLI::PositiveNumber);
  auto* dim_opt = bench->add_option("--dim", bench_dim, "Hypervector dimension")->check(CLI::Range(2, 1 << 24));
  bench->add_option("--out", bench_out, "Output directory");
  bench->add_option("--config", bench_config, "Base config applied to every cell")->check(CLI::ExistingFile);
  bench->add_option("--threads", bench_threads, "Cells run concurrently")->check(CLI::PositiveNumber);

  auto* pareto = app.add_subcommand("pareto", "Summarize records.csv and its Pareto frontier");
  std::string pareto_in;
  pareto->add_option("records", pareto_in, "records.csv")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const CostMap map = generate_map(gen_seed, gen_size, gen_size);
      const MapDataset ds = to_dataset(map, !gen_raw);
      const fs::path out(gen_out);
      auto f = open_or_throw(out);
      write_dataset_csv(f, ds.data);
      auto side = open_or_throw(fs::path(out).replace_extension(".json"));
      write_map_sidecar_json(side, map, ds);
      if (!gen_ppm.empty()) {
        auto p = open_or_throw(gen_ppm);
        write_map_ppm(p, map);
      }
      std::printf("wrote %s (%zu cells)\n", out.string().c_str(), ds.data.size());
    } else if (*run) {
      const RunConfig cfg = load_run_config(run_config);
      const std::vector<RunConfig> cells{cfg};
      const auto records = run_grid(cells, run_threads);
      emit_reports(records, run_out);
      auto f = open_or_throw(fs::path(run_out) / "config.txt");
      f << describe_run_config(cfg);
      report_failures(records);
      print_summary(aggregate(records));
      for (const auto& r : records) {
        if (!r.ok()) return 1;
      }
    } else if (*bench) {
      RunConfig base;
      if (!bench_config.empty()) base = load_run_config(bench_config);
      if (bench_config.empty() || *dim_opt) base.dim = bench_dim;
      base.seeds = first_seeds(bench_seeds);
      validate(base);
      const auto cells = default_grid(base);
      const auto records = run_grid(cells, bench_threads);
      emit_reports(records, bench_out);
      auto f = open_or_throw(fs::path(bench_out) / "config.txt");
      f << describe_run_config(base);
      report_failures(records);
      print_summary(aggregate(records));
    } else if (*pareto) {
      std::ifstream f(pareto_in);
      if (!f) throw Error(ErrorCode::kIo, "cannot read " + pareto_in);
      const auto records = read_records_csv(f);
      const auto cells = aggregate(records);
      print_summary(cells);
      std::printf("\nfrontier (by latency):\n");
      for (const auto i : pareto_frontier(cells)) {
        std::printf("  %-28s %12.6f s  mse %.6g\n", cells[i].label.c_str(), cells[i].mean_total_seconds,
                    cells[i].mean_mse);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hyperspace: %s\n", e.what());
    return 1;
  }
  return 0;
}
