#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "hyperspace/bench.hpp"
#include "hyperspace/error.hpp"

namespace hyperspace {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw Error(ErrorCode::kConfig, "key '" + std::string(key) + "': '" + std::string(value) +
                                      "' is not " + std::string(want));
}

double to_double(std::string_view key, const std::string& v) {
  std::istringstream is(v);
  is.imbue(std::locale::classic());
  double out = 0.0;
  is >> out;
  if (is.fail() || !(is >> std::ws).eof()) bad_value(key, v, "a number");
  return out;
}

std::uint64_t to_u64(std::string_view key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, v, "a non-negative integer");
  return out;
}

bool to_bool(std::string_view key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "a boolean");
}

std::vector<std::uint64_t> to_seeds(std::string_view key, std::string v) {
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::uint64_t> seeds;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) seeds.push_back(to_u64(key, item));
  }
  if (seeds.empty()) bad_value(key, v, "a list of seeds");
  return seeds;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"backend", [](RunConfig& c, const std::string&, const std::string& v) { c.backend = parse_backend(v); }},
      {"dim", [](RunConfig& c, const std::string& k, const std::string& v) { c.dim = to_u64(k, v); }},
      {"seeds", [](RunConfig& c, const std::string& k, const std::string& v) { c.seeds = to_seeds(k, v); }},
      {"exec", [](RunConfig& c, const std::string&, const std::string& v) { c.exec = parse_exec(v); }},
      {"warmup", [](RunConfig& c, const std::string& k, const std::string& v) { c.warmup = to_bool(k, v); }},
      {"map.width", [](RunConfig& c, const std::string& k, const std::string& v) { c.map.width = to_u64(k, v); }},
      {"map.height", [](RunConfig& c, const std::string& k, const std::string& v) { c.map.height = to_u64(k, v); }},
      {"codebook.k", [](RunConfig& c, const std::string& k, const std::string& v) { c.codebook_k = to_u64(k, v); }},
      {"scaling.position_span",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.position_span = to_double(k, v); }},
      {"scaling.value_span",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.value_span = to_double(k, v); }},
      {"values.normalize",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.normalize_values = to_bool(k, v); }},
      {"cleanup.method",
       [](RunConfig& c, const std::string&, const std::string& v) { c.cleanup.method = parse_cleanup(v); }},
      {"cleanup.timesteps",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.cleanup.timesteps = static_cast<int>(to_u64(k, v));
       }},
      {"cleanup.beta", [](RunConfig& c, const std::string& k, const std::string& v) { c.cleanup.beta = to_double(k, v); }},
      {"cleanup.tol",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.cleanup.convergence_tol = to_double(k, v); }},
      {"cleanup.normalize",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.cleanup.normalize = to_bool(k, v); }},
      {"regression.method",
       [](RunConfig& c, const std::string&, const std::string& v) { c.regression.method = parse_regression(v); }},
      {"regression.beta",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.regression.softmax_beta = to_double(k, v); }},
      {"nn.hidden", [](RunConfig& c, const std::string& k, const std::string& v) { c.regression.nn.hidden = to_u64(k, v); }},
      {"nn.epochs",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.regression.nn.epochs = static_cast<int>(to_u64(k, v));
       }},
      {"nn.lr",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.regression.nn.learning_rate = to_double(k, v); }},
      {"nn.batch",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.regression.nn.batch_size = to_u64(k, v); }},
      {"nn.seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.regression.nn.seed = to_u64(k, v); }},
  };
  return table;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.dim < 2) throw Error(ErrorCode::kConfig, "dim must be >= 2");
  if (cfg.seeds.empty()) throw Error(ErrorCode::kConfig, "at least one seed is required");
  if (cfg.map.width < 3 || cfg.map.height < 3) throw Error(ErrorCode::kConfig, "map must be at least 3x3");
  if (cfg.codebook_k < 2) throw Error(ErrorCode::kConfig, "codebook.k must be >= 2");
  if (!(cfg.position_span > 0.0) || !(cfg.value_span > 0.0)) {
    throw Error(ErrorCode::kConfig, "scaling spans must be > 0");
  }
  if (cfg.cleanup.method != CleanupMethod::kNone) validate(cfg.cleanup);
  validate(cfg.regression);
}

RunConfig parse_run_config(std::istream& in, RunConfig base) {
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::kConfig, "line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = unquote(trim(std::string_view(line).substr(eq + 1)));
    if (!section.empty()) key = section + "." + key;
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    try {
      it->second(base, key, value);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfig) throw;
      throw Error(ErrorCode::kConfig, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate(base);
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  return parse_run_config(in, std::move(base));
}

std::string describe_run_config(const RunConfig& c) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << "backend = " << to_string(c.backend) << '\n' << "dim = " << c.dim << '\n' << "seeds = ";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) os << (i ? "," : "") << c.seeds[i];
  os << '\n'
     << "exec = " << to_string(c.exec) << '\n'
     << "warmup = " << (c.warmup ? "true" : "false") << '\n'
     << "map.width = " << c.map.width << '\n'
     << "map.height = " << c.map.height << '\n'
     << "codebook.k = " << c.codebook_k << '\n'
     << "scaling.position_span = " << c.position_span << '\n'
     << "scaling.value_span = " << c.value_span << '\n'
     << "values.normalize = " << (c.normalize_values ? "true" : "false") << '\n'
     << "cleanup.method = " << to_string(c.cleanup.method) << '\n'
     << "cleanup.timesteps = " << c.cleanup.timesteps << '\n'
     << "cleanup.beta = " << c.cleanup.beta << '\n'
     << "cleanup.tol = " << c.cleanup.convergence_tol << '\n'
     << "cleanup.normalize = " << (c.cleanup.normalize ? "true" : "false") << '\n'
     << "regression.method = " << to_string(c.regression.method) << '\n'
     << "regression.beta = " << c.regression.softmax_beta << '\n'
     << "nn.hidden = " << c.regression.nn.hidden << '\n'
     << "nn.epochs = " << c.regression.nn.epochs << '\n'
     << "nn.lr = " << c.regression.nn.learning_rate << '\n'
     << "nn.batch = " << c.regression.nn.batch_size << '\n'
     << "nn.seed = " << c.regression.nn.seed << '\n';
  return os.str();
}

std::string config_label(const RunConfig& cfg) {
  return std::string(to_string(cfg.backend)) + "_" + std::string(to_string(cfg.cleanup.method)) + "_" +
         std::string(to_string(cfg.regression.method));
}

std::string config_fingerprint(const RunConfig& c) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << config_label(c) << "|d=" << c.dim << "|map=" << c.map.width << "x" << c.map.height
     << "|k=" << c.codebook_k << "|pos=" << c.position_span << "|val=" << c.value_span
     << "|norm=" << c.normalize_values;
  if (c.cleanup.method != CleanupMethod::kNone) {
    os << "|T=" << c.cleanup.timesteps << "|tol=" << c.cleanup.convergence_tol;
    if (c.cleanup.method == CleanupMethod::kHopfield) os << "|beta=" << c.cleanup.beta;
    if (c.cleanup.method == CleanupMethod::kResonator) os << "|N=" << c.cleanup.normalize;
  }
  if (c.regression.method == RegressionMethod::kCodebook) {
    os << "|rbeta=" << c.regression.softmax_beta;
  } else {
    const auto& nn = c.regression.nn;
    os << "|H=" << nn.hidden << "|ep=" << nn.epochs << "|lr=" << nn.learning_rate << "|bs=" << nn.batch_size
       << "|nnseed=" << nn.seed;
  }
  return os.str();
}

}  // namespace hyperspace
