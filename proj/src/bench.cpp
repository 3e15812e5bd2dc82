#include "hyperspace/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "hyperspace/batch.hpp"
#include "hyperspace/error.hpp"
#include "hyperspace/mapgen.hpp"

namespace hyperspace {

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::kPositionalEncoding: return "positional_encoding";
    case Stage::kValueEncoding: return "value_encoding";
    case Stage::kMemoryStorage: return "memory_storage";
    case Stage::kPositionalInversion: return "positional_inversion";
    case Stage::kCleanup: return "cleanup";
    case Stage::kRegression: return "regression";
  }
  return "unknown";
}

double BenchRecord::total_seconds() const noexcept {
  return std::accumulate(stage_seconds.begin(), stage_seconds.end(), 0.0);
}

namespace {

using Clock = std::chrono::steady_clock;

// Times one stage and attributes the backend's op delta to it. Errors are
// re-raised with the stage name attached.
class StageTimer {
 public:
  StageTimer(BenchRecord& rec, const CountingBackend& counter) : rec_(rec), counter_(counter) {}

  template <typename Fn>
  void run(Stage s, Fn&& fn) {
    const auto idx = static_cast<std::size_t>(s);
    const OpCounts before = counter_.counts();
    const auto t0 = Clock::now();
    try {
      fn();
    } catch (const Error& e) {
      throw Error(e.code(), "stage " + std::string(to_string(s)) + ": " + e.what());
    }
    rec_.stage_seconds[idx] = std::chrono::duration<double>(Clock::now() - t0).count();
    rec_.stage_ops[idx] = counter_.counts() - before;
  }

 private:
  BenchRecord& rec_;
  const CountingBackend& counter_;
};

// Touches every kernel once so plan caches and allocators are hot before the
// timed stages. Runs on the uncounted backend.
void warm_up(std::shared_ptr<const Backend> plain, const EncoderConfig& ec) {
  const SpatialEncoder enc(std::move(plain), ec);
  const std::vector<double> x(enc.n(), 0.5);
  const Hypervector p = encode_position(enc, x);
  const Hypervector v = encode_value(enc, enc.value_range().lo);
  MemoryVector mem(enc.tag(), enc.dim());
  mem = store(enc.backend(), std::move(mem), p, v);
  const Hypervector q = query(mem, enc, x);
  (void)enc.backend().similarity(q, v);
}

}  // namespace

BenchRecord run_pipeline(const RunConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  BenchRecord rec;
  rec.label = config_label(cfg);
  rec.fingerprint = config_fingerprint(cfg);
  rec.backend = cfg.backend;
  rec.cleanup = cfg.cleanup.method;
  rec.regression = cfg.regression.method;
  rec.dim = cfg.dim;
  rec.codebook_k = cfg.codebook_k;
  rec.timesteps = cfg.cleanup.method == CleanupMethod::kNone ? 0 : cfg.cleanup.timesteps;
  rec.seed = seed;
  rec.width = cfg.map.width;
  rec.height = cfg.map.height;

  const CostMap map = generate_map(seed, cfg.map.width, cfg.map.height, cfg.exec);
  const MapDataset md = to_dataset(map, cfg.normalize_values);
  const Dataset& data = md.data;
  rec.samples = data.size();

  const auto plain = make_backend(cfg.backend);
  const auto counter = std::make_shared<CountingBackend>(plain);
  const std::array<std::size_t, 2> extents{cfg.map.width, cfg.map.height};
  const EncoderConfig ec = grid_encoder_config(cfg.dim, extents, data.value_range, cfg.position_span,
                                               cfg.value_span, seed);
  if (cfg.warmup) warm_up(plain, ec);

  const SpatialEncoder enc(counter, ec);
  const Codebook cb = build_codebook(enc, cfg.codebook_k);
  rec.setup_ops = counter->counts();
  const Backend& be = *counter;

  std::vector<std::vector<double>> xs;
  std::vector<double> vs;
  xs.reserve(data.size());
  vs.reserve(data.size());
  for (const auto& s : data.samples) {
    xs.push_back(s.x);
    vs.push_back(s.v);
  }

  const std::size_t vec_bytes = payload_bytes(cfg.backend, cfg.dim);
  rec.vector_payload_bytes = vec_bytes;
  std::size_t live = cb.k() + 3;  // codebook, bases, memory
  std::size_t peak = live;

  StageTimer timer(rec, *counter);
  std::vector<Hypervector> positions;
  std::vector<Hypervector> values;
  EncodeDiagnostics diag;
  timer.run(Stage::kPositionalEncoding, [&] { positions = encode_positions(enc, xs); });
  live += positions.size();
  timer.run(Stage::kValueEncoding, [&] { values = encode_values(enc, vs, &diag); });
  live += values.size();
  peak = std::max(peak, live);
  rec.clamped_values = diag.clamped_values;

  MemoryVector mem(cfg.backend, cfg.dim);
  timer.run(Stage::kMemoryStorage, [&] {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      mem = store(be, std::move(mem), positions[i], values[i]);
    }
  });
  live -= positions.size() + values.size();
  positions = {};
  values = {};

  std::vector<Hypervector> noisy;
  timer.run(Stage::kPositionalInversion, [&] { noisy = query_batch(mem, enc, xs, cfg.exec); });
  rec.queries = noisy.size();
  live += noisy.size() + 1;  // queries and N(m)
  peak = std::max(peak, live);

  std::vector<Hypervector> cleaned;
  timer.run(Stage::kCleanup, [&] {
    if (cfg.cleanup.method == CleanupMethod::kNone) return;
    auto results = cleanup_batch(be, noisy, cb, cfg.cleanup, cfg.exec);
    cleaned.reserve(results.size());
    for (auto& r : results) {
      rec.cleanup_iterations += static_cast<std::size_t>(r.iterations);
      rec.converged_queries += r.converged ? 1 : 0;
      cleaned.push_back(std::move(r.y));
    }
  });
  if (cfg.cleanup.method == CleanupMethod::kNone) {
    cleaned = std::move(noisy);
  } else {
    live += cleaned.size();
    peak = std::max(peak, live);
    noisy = {};
  }

  if (cfg.regression.method == RegressionMethod::kCodebook) {
    timer.run(Stage::kRegression, [&] {
      rec.predictions = decode_codebook_batch(be, cleaned, cb, cfg.regression.softmax_beta, cfg.exec);
    });
  } else {
    MlpConfig nn = cfg.regression.nn;
    nn.seed = splitmix64(nn.seed ^ seed);
    const auto t0 = Clock::now();
    TrainResult trained;
    try {
      trained = train_mlp(cleaned, vs, nn);
    } catch (const Error& e) {
      throw Error(e.code(), "stage regression (training): " + std::string(e.what()));
    }
    rec.train_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    rec.train_mse = trained.final_mse;
    timer.run(Stage::kRegression, [&] {
      rec.predictions = decode_mlp_batch(trained.decoder, cleaned, cfg.exec);
    });
  }
  rec.peak_vector_bytes = peak * vec_bytes;

  rec.truth = vs;
  double sse = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double e = rec.predictions[i] - vs[i];
    sse += e * e;
  }
  rec.mse = sse / static_cast<double>(vs.size());
  return rec;
}

std::vector<RunConfig> default_grid(const RunConfig& base) {
  std::vector<RunConfig> cells;
  for (const BackendTag b : {BackendTag::kHrr, BackendTag::kFhrr}) {
    for (const CleanupMethod c : {CleanupMethod::kNone, CleanupMethod::kResonator, CleanupMethod::kHopfield}) {
      for (const RegressionMethod r : {RegressionMethod::kCodebook, RegressionMethod::kNeuralNet}) {
        RunConfig cell = base;
        cell.backend = b;
        cell.cleanup.method = c;
        cell.regression.method = r;
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<BenchRecord> run_grid(std::span<const RunConfig> cells, int threads) {
  if (cells.empty()) throw Error(ErrorCode::kInvalidArgument, "empty configuration grid");
  struct Job {
    const RunConfig* cfg;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& c : cells) {
    for (const auto s : c.seeds) jobs.push_back({&c, s});
  }
  std::vector<BenchRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      try {
        out[i] = run_pipeline(*job.cfg, job.seed);
      } catch (const std::exception& e) {
        BenchRecord failed;
        failed.label = config_label(*job.cfg);
        failed.fingerprint = config_fingerprint(*job.cfg);
        failed.backend = job.cfg->backend;
        failed.cleanup = job.cfg->cleanup.method;
        failed.regression = job.cfg->regression.method;
        failed.dim = job.cfg->dim;
        failed.codebook_k = job.cfg->codebook_k;
        failed.timesteps = job.cfg->cleanup.timesteps;
        failed.seed = job.seed;
        failed.status = e.what();
        out[i] = std::move(failed);
      }
    }
  };

  const auto n = static_cast<std::size_t>(std::max(1, threads));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(n, jobs.size()); ++t) pool.emplace_back(worker);
  }
  return out;
}

namespace {

double mean_of(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Sample standard deviation; 0 for fewer than two values.
double std_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (const double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<Aggregate> aggregate(std::span<const BenchRecord> records) {
  std::vector<Aggregate> cells;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<const BenchRecord*>> members;
  for (const auto& r : records) {
    auto [it, fresh] = index.try_emplace(r.fingerprint, cells.size());
    if (fresh) {
      Aggregate a;
      a.label = r.label;
      a.fingerprint = r.fingerprint;
      a.backend = to_string(r.backend);
      a.cleanup = to_string(r.cleanup);
      a.regression = to_string(r.regression);
      cells.push_back(std::move(a));
      members.emplace_back();
    }
    if (r.ok()) {
      members[it->second].push_back(&r);
    } else {
      ++cells[it->second].failures;
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    Aggregate& a = cells[c];
    const auto& rs = members[c];
    a.runs = rs.size();
    std::vector<double> col(rs.size());
    for (std::size_t s = 0; s < kStageCount; ++s) {
      for (std::size_t i = 0; i < rs.size(); ++i) col[i] = rs[i]->stage_seconds[s];
      a.mean_stage_seconds[s] = mean_of(col);
      a.std_stage_seconds[s] = std_of(col);
    }
    for (std::size_t i = 0; i < rs.size(); ++i) col[i] = rs[i]->total_seconds();
    a.mean_total_seconds = mean_of(col);
    a.std_total_seconds = std_of(col);
    for (std::size_t i = 0; i < rs.size(); ++i) col[i] = rs[i]->train_seconds;
    a.mean_train_seconds = mean_of(col);
    for (std::size_t i = 0; i < rs.size(); ++i) col[i] = rs[i]->mse;
    a.mean_mse = mean_of(col);
    a.std_mse = std_of(col);
  }
  for (const auto i : pareto_frontier(cells)) cells[i].pareto = true;
  return cells;
}

std::vector<std::size_t> pareto_frontier(std::span<const std::array<double, 2>> points) {
  const auto dominates = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
  };
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      dominated = j != i && dominates(points[j], points[i]);
    }
    if (!dominated) front.push_back(i);
  }
  std::stable_sort(front.begin(), front.end(),
                   [&](std::size_t a, std::size_t b) { return points[a][0] < points[b][0]; });
  return front;
}

std::vector<std::size_t> pareto_frontier(std::span<const Aggregate> cells) {
  std::vector<std::array<double, 2>> pts;
  std::vector<std::size_t> map;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].runs == 0) continue;
    pts.push_back({cells[i].mean_total_seconds, cells[i].mean_mse});
    map.push_back(i);
  }
  auto front = pareto_frontier(std::span<const std::array<double, 2>>(pts));
  for (auto& i : front) i = map[i];
  return front;
}

namespace {

std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

std::vector<std::string> record_columns() {
  std::vector<std::string> cols = {"label",        "fingerprint",   "backend",
                                   "cleanup",      "regression",    "dim",
                                   "codebook_k",   "timesteps",     "seed",
                                   "status",       "samples",       "queries",
                                   "mse",          "train_mse",     "cleanup_iterations",
                                   "converged_queries", "clamped_values", "vector_payload_bytes",
                                   "peak_vector_bytes"};
  for (const Stage s : kStages) cols.push_back("time_" + std::string(to_string(s)) + "_s");
  cols.emplace_back("time_total_s");
  cols.emplace_back("time_train_s");
  for (const Stage s : kStages) {
    for (std::size_t o = 0; o < kOpCount; ++o) {
      cols.push_back("ops_" + std::string(to_string(s)) + "_" + std::string(to_string(static_cast<Op>(o))));
    }
  }
  for (std::size_t o = 0; o < kOpCount; ++o) {
    cols.push_back("ops_setup_" + std::string(to_string(static_cast<Op>(o))));
  }
  return cols;
}

std::vector<std::string> record_row(const BenchRecord& r) {
  std::vector<std::string> row = {r.label,
                                  r.fingerprint,
                                  std::string(to_string(r.backend)),
                                  std::string(to_string(r.cleanup)),
                                  std::string(to_string(r.regression)),
                                  std::to_string(r.dim),
                                  std::to_string(r.codebook_k),
                                  std::to_string(r.timesteps),
                                  std::to_string(r.seed),
                                  r.status,
                                  std::to_string(r.samples),
                                  std::to_string(r.queries),
                                  fmt_g17(r.mse),
                                  fmt_g17(r.train_mse),
                                  std::to_string(r.cleanup_iterations),
                                  std::to_string(r.converged_queries),
                                  std::to_string(r.clamped_values),
                                  std::to_string(r.vector_payload_bytes),
                                  std::to_string(r.peak_vector_bytes)};
  for (const double t : r.stage_seconds) row.push_back(fmt_g17(t));
  row.push_back(fmt_g17(r.total_seconds()));
  row.push_back(fmt_g17(r.train_seconds));
  for (const auto& ops : r.stage_ops) {
    for (const auto n : ops.n) row.push_back(std::to_string(n));
  }
  for (const auto n : r.setup_ops.n) row.push_back(std::to_string(n));
  return row;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + p.string());
  return f;
}

void check_written(std::ofstream& f, const std::filesystem::path& p) {
  f.flush();
  if (!f) throw Error(ErrorCode::kIo, "write failed for " + p.string());
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const BenchRecord> records) {
  const auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  };
  write_row(record_columns());
  for (const auto& r : records) write_row(record_row(r));
}

std::vector<BenchRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kFormat, "records.csv: missing header");
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& name : record_columns()) {
    if (!col.contains(name)) throw Error(ErrorCode::kFormat, "records.csv: missing column '" + name + "'");
  }

  std::vector<BenchRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kFormat, "records.csv line " + std::to_string(line_no) + ": expected " +
                                          std::to_string(header.size()) + " fields, got " +
                                          std::to_string(f.size()));
    }
    const auto get = [&](const std::string& name) -> const std::string& { return f[col.at(name)]; };
    const auto num = [&](const std::string& name) {
      try {
        std::size_t used = 0;
        const double v = std::stod(get(name), &used);
        if (used != get(name).size()) throw std::invalid_argument(name);
        return v;
      } catch (const std::exception&) {
        throw Error(ErrorCode::kFormat, "records.csv line " + std::to_string(line_no) + ": bad value in '" +
                                            name + "'");
      }
    };
    const auto u64 = [&](const std::string& name) {
      try {
        return static_cast<std::uint64_t>(std::stoull(get(name)));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kFormat, "records.csv line " + std::to_string(line_no) + ": bad value in '" +
                                            name + "'");
      }
    };

    BenchRecord r;
    r.label = get("label");
    r.fingerprint = get("fingerprint");
    r.backend = parse_backend(get("backend"));
    r.cleanup = parse_cleanup(get("cleanup"));
    r.regression = parse_regression(get("regression"));
    r.dim = u64("dim");
    r.codebook_k = u64("codebook_k");
    r.timesteps = static_cast<int>(u64("timesteps"));
    r.seed = u64("seed");
    r.status = get("status");
    r.samples = u64("samples");
    r.queries = u64("queries");
    r.mse = num("mse");
    r.train_mse = num("train_mse");
    r.cleanup_iterations = u64("cleanup_iterations");
    r.converged_queries = u64("converged_queries");
    r.clamped_values = u64("clamped_values");
    r.vector_payload_bytes = u64("vector_payload_bytes");
    r.peak_vector_bytes = u64("peak_vector_bytes");
    for (std::size_t s = 0; s < kStageCount; ++s) {
      const std::string stage(to_string(kStages[s]));
      r.stage_seconds[s] = num("time_" + stage + "_s");
      for (std::size_t o = 0; o < kOpCount; ++o) {
        r.stage_ops[s].n[o] = u64("ops_" + stage + "_" + std::string(to_string(static_cast<Op>(o))));
      }
    }
    for (std::size_t o = 0; o < kOpCount; ++o) {
      r.setup_ops.n[o] = u64("ops_setup_" + std::string(to_string(static_cast<Op>(o))));
    }
    r.train_seconds = num("time_train_s");
    out.push_back(std::move(r));
  }
  return out;
}

void write_aggregate_json(std::ostream& out, std::span<const Aggregate> cells) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& a : cells) {
    nlohmann::ordered_json j;
    j["label"] = a.label;
    j["fingerprint"] = a.fingerprint;
    j["backend"] = a.backend;
    j["cleanup"] = a.cleanup;
    j["regression"] = a.regression;
    j["runs"] = a.runs;
    j["failures"] = a.failures;
    nlohmann::ordered_json mean, sd;
    for (std::size_t s = 0; s < kStageCount; ++s) {
      const std::string name(to_string(kStages[s]));
      mean[name] = a.mean_stage_seconds[s];
      sd[name] = a.std_stage_seconds[s];
    }
    j["mean_stage_seconds"] = mean;
    j["std_stage_seconds"] = sd;
    j["mean_total_seconds"] = a.mean_total_seconds;
    j["std_total_seconds"] = a.std_total_seconds;
    j["mean_train_seconds"] = a.mean_train_seconds;
    j["mean_mse"] = a.mean_mse;
    j["std_mse"] = a.std_mse;
    j["pareto"] = a.pareto;
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["cells"] = std::move(arr);
  out << root.dump(2) << '\n';
}

void emit_reports(std::span<const BenchRecord> records, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

  const auto records_path = out_dir / "records.csv";
  auto rf = open_out(records_path);
  write_records_csv(rf, records);
  check_written(rf, records_path);

  const auto cells = aggregate(records);
  const auto agg_path = out_dir / "aggregate.json";
  auto af = open_out(agg_path);
  write_aggregate_json(af, cells);
  check_written(af, agg_path);

  const auto write_grid = [](const std::filesystem::path& p, const BenchRecord& r, const std::vector<double>& vals) {
    auto f = open_out(p);
    f << "row,col,value\n";
    for (std::size_t i = 0; i < vals.size(); ++i) {
      f << i / r.width << ',' << i % r.width << ',' << fmt_g17(vals[i]) << '\n';
    }
    check_written(f, p);
  };
  std::map<std::uint64_t, bool> truth_written;
  for (const auto& r : records) {
    if (!r.ok() || r.width == 0) continue;
    write_grid(out_dir / ("reconstruction_" + r.label + "_" + std::to_string(r.seed) + ".csv"), r, r.predictions);
    if (!truth_written[r.seed]) {
      write_grid(out_dir / ("ground_truth_" + std::to_string(r.seed) + ".csv"), r, r.truth);
      truth_written[r.seed] = true;
    }
  }
}

}  // namespace hyperspace
