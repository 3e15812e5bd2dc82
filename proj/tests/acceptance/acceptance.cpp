// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure.
//
//   acceptance <path-to-hyperspace-cli> <scratch-dir>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperspace/bench.hpp"
#include "hyperspace/fhrr.hpp"
#include "hyperspace/hrr.hpp"
#include "hyperspace/mapgen.hpp"

namespace fs = std::filesystem;
using namespace hyperspace;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
  std::printf("%s  %-26s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> random_reals(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

Hypervector random_phasors(Rng& rng, std::size_t d) {
  std::vector<Complex> v(d);
  for (auto& z : v) z = std::polar(1.0, rng.uniform(-3.141592653589793, 3.141592653589793));
  return Hypervector::complex(std::move(v));
}

void algebra_oracle() {
  const auto t0 = Clock::now();
  Rng rng(1001);
  double worst_hrr = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 2 + rng.below(63);  // 2..64
    const auto a = random_reals(rng, d);
    const auto b = random_reals(rng, d);
    std::vector<double> want(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t j = 0; j < d; ++j) want[k] += a[j] * b[(k + d - j) % d];
    }
    const auto got = hrr_bind(Hypervector::real(a), Hypervector::real(b));
    double err = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      err += (got.reals()[k] - want[k]) * (got.reals()[k] - want[k]);
      ref += want[k] * want[k];
    }
    worst_hrr = std::max(worst_hrr, std::sqrt(err / ref));
  }
  double worst_fhrr = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + rng.below(64);
    const auto a = random_phasors(rng, d);
    const auto b = random_phasors(rng, d);
    const auto id = fhrr_bind(a, fhrr_invert(a));
    const auto back = fhrr_bind(fhrr_bind(a, b), fhrr_invert(b));
    for (std::size_t j = 0; j < d; ++j) {
      worst_fhrr = std::max(worst_fhrr, std::abs(id.phasors()[j] - Complex(1.0, 0.0)));
      worst_fhrr = std::max(worst_fhrr, std::abs(back.phasors()[j] - a.phasors()[j]));
      const Complex prod = a.phasors()[j] * b.phasors()[j];
      worst_fhrr = std::max(worst_fhrr, std::abs(fhrr_bind(a, b).phasors()[j] - prod));
    }
  }
  const double elapsed = seconds_since(t0);
  report(worst_hrr < 1e-6 && worst_fhrr < 1e-9 && elapsed < 5.0, "algebra-oracle",
         fmt("hrr rel err %.2e (<1e-6), fhrr identity err %.2e (<1e-9), %.2fs (<5s)", worst_hrr, worst_fhrr,
             elapsed));
}

void fpe_homomorphism() {
  const auto t0 = Clock::now();
  double worst = 1.0;
  for (const auto tag : {BackendTag::kHrr, BackendTag::kFhrr}) {
    const auto be = make_backend(tag);
    Rng rng(tag == BackendTag::kHrr ? 2001 : 2002);
    const auto base = be->sample_base(rng, 1024);
    for (int t = 0; t < 100; ++t) {
      const double x = rng.uniform(-20.0, 20.0);
      const double y = rng.uniform(-20.0, 20.0);
      const double s = be->similarity(be->bind(be->encode(base, x), be->encode(base, y)), be->encode(base, x + y));
      worst = std::min(worst, s);
    }
  }
  const double elapsed = seconds_since(t0);
  report(worst >= 1.0 - 1e-6 && elapsed < 5.0, "fpe-homomorphism",
         fmt("min similarity %.12f (>= 1-1e-6) over 2x100 pairs at D=1024, %.2fs (<5s)", worst, elapsed));
}

void single_pair_recall() {
  double worst_fhrr = 1.0, worst_hrr = 1.0;
  for (const auto tag : {BackendTag::kFhrr, BackendTag::kHrr}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SpatialEncoder enc(make_backend(tag), grid_encoder_config(8192, std::array<std::size_t, 2>{28, 28},
                                                                      {0.0, 1.0}, 6.0, 64.0, seed));
      Rng rng(3000 + seed);
      const std::array<double, 2> x{static_cast<double>(rng.below(28)), static_cast<double>(rng.below(28))};
      const auto v = encode_value(enc, rng.uniform());
      MemoryVector mem(tag, 8192);
      mem = store(enc.backend(), std::move(mem), encode_position(enc, x), v);
      const double s = enc.backend().similarity(query(mem, enc, x), v);
      (tag == BackendTag::kFhrr ? worst_fhrr : worst_hrr) = std::min(tag == BackendTag::kFhrr ? worst_fhrr : worst_hrr, s);
    }
  }
  report(worst_fhrr >= 1.0 - 1e-6 && worst_hrr >= 0.999, "single-pair-recall",
         fmt("fhrr min cos %.12f (>= 1-1e-6), hrr min cos %.9f (>= 0.999), D=8192, 5 seeds", worst_fhrr, worst_hrr));
}

void edt_oracle() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t on_path = 0;
  bool path_cells_ok = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto map = generate_map(seed);
    for (std::size_t r = 0; r < map.height; ++r) {
      for (std::size_t c = 0; c < map.width; ++c) {
        double best = 1e300;
        for (const auto& p : map.path) {
          const double dx = p.x - static_cast<double>(c);
          const double dy = p.y - static_cast<double>(r);
          best = std::min(best, std::sqrt(dx * dx + dy * dy));
        }
        worst = std::max(worst, std::abs(map.at(c, r) - (1.0 + best)));
        if (best == 0.0) {
          ++on_path;
          path_cells_ok = path_cells_ok && map.at(c, r) == 1.0;
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  report(worst < 1e-9 && path_cells_ok && on_path >= 10 && elapsed < 10.0, "edt-oracle",
         fmt("max |field - brute force| %.2e (<1e-9), %zu path cells all cost 1.0: %s, 5 seeds, %.2fs (<10s)", worst,
             on_path, path_cells_ok ? "yes" : "no", elapsed));
}

struct CellRuns {
  BackendTag backend;
  CleanupMethod cleanup;
  std::vector<BenchRecord> records;

  double mean_mse() const {
    double s = 0.0;
    for (const auto& r : records) s += r.mse;
    return s / static_cast<double>(records.size());
  }
};

std::vector<CellRuns> end_to_end_runs(double* elapsed_e2e) {
  std::vector<CellRuns> cells;
  const auto t0 = Clock::now();
  for (const auto tag : {BackendTag::kHrr, BackendTag::kFhrr}) {
    for (const auto cl : {CleanupMethod::kNone, CleanupMethod::kHopfield}) {
      RunConfig cfg;
      cfg.backend = tag;
      cfg.dim = 8192;
      cfg.cleanup.method = cl;
      cfg.cleanup.timesteps = 10;
      cfg.cleanup.beta = 20.0;
      cfg.codebook_k = 65;
      cfg.regression.method = RegressionMethod::kCodebook;
      CellRuns cell{tag, cl, {}};
      for (const auto seed : cfg.seeds) cell.records.push_back(run_pipeline(cfg, seed));
      cells.push_back(std::move(cell));
    }
  }
  *elapsed_e2e = seconds_since(t0);
  for (const auto tag : {BackendTag::kHrr, BackendTag::kFhrr}) {
    RunConfig cfg;
    cfg.backend = tag;
    cfg.cleanup.method = CleanupMethod::kResonator;
    CellRuns cell{tag, CleanupMethod::kResonator, {}};
    for (const auto seed : cfg.seeds) cell.records.push_back(run_pipeline(cfg, seed));
    cells.push_back(std::move(cell));
  }
  return cells;
}

void end_to_end(const std::vector<CellRuns>& cells, double elapsed) {
  bool ok = elapsed < 300.0;
  std::string detail;
  for (const auto tag : {BackendTag::kHrr, BackendTag::kFhrr}) {
    double none = 0.0, hop = 0.0;
    for (const auto& c : cells) {
      if (c.backend != tag) continue;
      if (c.cleanup == CleanupMethod::kNone) none = c.mean_mse();
      if (c.cleanup == CleanupMethod::kHopfield) hop = c.mean_mse();
    }
    ok = ok && hop < none;
    detail += fmt("%s hopfield %.6f < none %.6f; ", std::string(to_string(tag)).c_str(), hop, none);
  }
  detail += fmt("D=8192, 5 seeds, %.1fs (<300s)", elapsed);
  report(ok, "end-to-end-reconstruction", detail);
}

void stage_dominance(const std::vector<CellRuns>& cells) {
  bool ok = true;
  std::string detail;
  for (const auto& c : cells) {
    if (c.cleanup == CleanupMethod::kNone) continue;
    double share_sum = 0.0;
    double total = 0.0, tail = 0.0;
    for (const auto& r : c.records) {
      total += r.total_seconds();
      tail += r.seconds(Stage::kCleanup) + r.seconds(Stage::kRegression);
      share_sum += (r.seconds(Stage::kCleanup) + r.seconds(Stage::kRegression)) / r.total_seconds();
    }
    const double share = tail / total;
    ok = ok && share > 0.5;
    detail += fmt("%s/%s %.1f%%; ", std::string(to_string(c.backend)).c_str(),
                  std::string(to_string(c.cleanup)).c_str(), 100.0 * share);
    (void)share_sum;
  }
  detail += "cleanup+regression share of total (>50%), k=65, T=10";
  report(ok, "stage-dominance", detail);
}

void storage_ratio(const std::vector<CellRuns>& cells) {
  bool ok = true;
  std::string detail;
  Rng rng(4001);
  for (const std::size_t d : {16, 1024, 8096, 8192}) {
    auto hrr_vec = make_backend(BackendTag::kHrr)->encode(make_backend(BackendTag::kHrr)->sample_base(rng, d), 0.5);
    auto fhrr_vec = make_backend(BackendTag::kFhrr)->encode(make_backend(BackendTag::kFhrr)->sample_base(rng, d), 0.5);
    const auto h = serialize(hrr_vec).size() - kHypervectorHeaderBytes;
    const auto f = serialize(fhrr_vec).size() - kHypervectorHeaderBytes;
    ok = ok && f == 2 * h && h == 4 * d;
    if (d == 8192) detail += fmt("D=8192: hrr %zu B, fhrr %zu B; ", h, f);
  }
  std::size_t hrr_rec = 0, fhrr_rec = 0;
  for (const auto& c : cells) {
    (c.backend == BackendTag::kHrr ? hrr_rec : fhrr_rec) = c.records.front().vector_payload_bytes;
  }
  ok = ok && fhrr_rec == 2 * hrr_rec;
  detail += fmt("pipeline records %zu vs %zu B", hrr_rec, fhrr_rec);
  report(ok, "storage-ratio", detail);
}

void op_accounting(const std::vector<CellRuns>& cells) {
  constexpr std::uint64_t n = 2, k = 65, N = 784;
  bool ok = true;
  std::size_t checked = 0;
  std::string first_bad;
  const auto expect = [&](const BenchRecord& r, Stage s, OpCounts want) {
    if (!(r.ops(s) == want)) {
      ok = false;
      if (first_bad.empty()) {
        first_bad = fmt(" first mismatch: %s seed %llu stage %s", r.label.c_str(),
                        static_cast<unsigned long long>(r.seed), std::string(to_string(s)).c_str());
      }
    }
  };
  for (const auto& c : cells) {
    for (const auto& r : c.records) {
      OpCounts pe, ve, ms, pi, cl, rg;
      pe[Op::kEncode] = n * N;          // n encodes per sample
      pe[Op::kBind] = (n - 1) * N;      // n-1 binds per sample
      ve[Op::kEncode] = N;
      ms[Op::kBind] = N;
      ms[Op::kBundle] = N;
      pi[Op::kEncode] = n * N;
      pi[Op::kBind] = (n - 1) * N + N;  // positional binds + one unbind per query
      pi[Op::kInvert] = N;
      pi[Op::kNormalize] = 1;
      const std::uint64_t t = r.cleanup_iterations;
      if (c.cleanup != CleanupMethod::kNone) {
        cl[Op::kSimilarity] = k * t;
        cl[Op::kWeight] = k * t;
        cl[Op::kBundle] = (k - 1) * t;
        cl[Op::kNormalize] = t;
        if (c.cleanup == CleanupMethod::kHopfield) cl[Op::kSoftmax] = t;
      }
      rg[Op::kSimilarity] = k * N;
      expect(r, Stage::kPositionalEncoding, pe);
      expect(r, Stage::kValueEncoding, ve);
      expect(r, Stage::kMemoryStorage, ms);
      expect(r, Stage::kPositionalInversion, pi);
      expect(r, Stage::kCleanup, cl);
      expect(r, Stage::kRegression, rg);
      if (c.cleanup != CleanupMethod::kNone && (t < N || t > 10 * N)) {
        ok = false;
        if (first_bad.empty()) first_bad = fmt(" iteration total %llu outside [N, 10N]", static_cast<unsigned long long>(t));
      }
      ++checked;
    }
  }
  report(ok, "op-accounting",
         fmt("%zu records x 6 stages match the closed forms for n=2, k=65, N=784%s", checked, first_bad.c_str()));
}

void mlp_gradient_check() {
  Rng rng(5001);
  double worst = 0.0;
  for (const auto tag : {BackendTag::kHrr, BackendTag::kFhrr}) {
    MlpDecoder dec = MlpDecoder::initialize(tag, 16, 12, rng);
    for (Eigen::Index i = 0; i < dec.b1().size(); ++i) dec.b1()(i) = rng.uniform(-0.3, 0.3);
    const auto width = static_cast<Eigen::Index>(dec.input_width());
    Eigen::MatrixXd X(width, 8);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform(-1.0, 1.0);
    Eigen::VectorXd y(8);
    for (Eigen::Index i = 0; i < 8; ++i) y(i) = rng.uniform();
    MlpDecoder::Gradients g;
    (void)dec.loss_and_gradients(X, y, &g);
    const double h = 1e-6;
    const auto probe = [&](double& p, double analytic) {
      const double keep = p;
      p = keep + h;
      const double up = dec.loss_and_gradients(X, y, nullptr);
      p = keep - h;
      const double down = dec.loss_and_gradients(X, y, nullptr);
      p = keep;
      const double numeric = (up - down) / (2.0 * h);
      worst = std::max(worst, std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6}));
    };
    for (Eigen::Index r = 0; r < dec.w1().rows(); ++r) {
      for (Eigen::Index c = 0; c < dec.w1().cols(); ++c) probe(dec.w1()(r, c), g.w1(r, c));
      probe(dec.b1()(r), g.b1(r));
      probe(dec.w2()(r), g.w2(r));
    }
    probe(dec.b2(), g.b2);
  }
  report(worst < 1e-4, "mlp-gradient-check", fmt("max relative error %.2e (<1e-4), D=16, both backends", worst));
}

// records.csv with every time_* column removed.
std::string untimed_records(const fs::path& p) {
  std::ifstream f(p);
  std::string line, out;
  std::vector<bool> keep;
  bool header = true;
  while (std::getline(f, line)) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (const char ch : line) {
      if (ch == '"') quoted = !quoted;
      if (ch == ',' && !quoted) {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    fields.push_back(cur);
    if (header) {
      for (const auto& h : fields) keep.push_back(h.rfind("time_", 0) != 0);
      header = false;
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i < keep.size() && keep[i]) out += fields[i] + ",";
    }
    out += "\n";
  }
  return out;
}

void cli_determinism(const std::string& cli, const fs::path& work) {
  const auto t0 = Clock::now();
  std::array<std::string, 2> results;
  bool ran = true;
  for (int i = 0; i < 2; ++i) {
    const fs::path out = work / ("determinism_" + std::to_string(i));
    fs::remove_all(out);
    const std::string cmd = "\"" + cli + "\" bench --grid default --seeds 5 --dim 1024 --out \"" + out.string() +
                            "\" > \"" + (work / ("determinism_" + std::to_string(i) + ".log")).string() + "\" 2>&1";
    ran = ran && std::system(cmd.c_str()) == 0 && fs::exists(out / "records.csv");
    if (ran) results[i] = untimed_records(out / "records.csv");
  }
  const std::size_t rows = static_cast<std::size_t>(std::count(results[0].begin(), results[0].end(), '\n'));
  const bool ok = ran && !results[0].empty() && results[0] == results[1] && rows == 61;
  report(ok, "cli-determinism",
         fmt("two `bench --seeds 5 --dim 1024` runs, records.csv identical without time_ columns: %s, %zu rows, %.0fs",
             ran ? (results[0] == results[1] ? "yes" : "no") : "run failed", rows, seconds_since(t0)));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <hyperspace-cli> <scratch-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path work = argv[2];
  fs::create_directories(work);

  try {
    algebra_oracle();
    fpe_homomorphism();
    single_pair_recall();
    edt_oracle();
    double elapsed = 0.0;
    const auto cells = end_to_end_runs(&elapsed);
    end_to_end(cells, elapsed);
    stage_dominance(cells);
    storage_ratio(cells);
    op_accounting(cells);
    mlp_gradient_check();
    cli_determinism(cli, work);
  } catch (const std::exception& e) {
    std::printf("FAIL  %-26s %s\n", "harness", e.what());
    return 1;
  }
  std::printf("\n%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
