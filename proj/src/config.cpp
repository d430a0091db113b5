#include "schrolab/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace schrolab {

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config key '" + key + "': " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    bad_key(key, "expected a number, got '" + v + "'");
  }
  if (pos != v.size()) bad_key(key, "trailing characters in '" + v + "'");
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  const auto i = static_cast<long long>(std::llround(x));
  if (static_cast<double>(i) != x) bad_key(key, "expected an integer, got '" + v + "'");
  return i;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& v) {
  std::vector<double> out;
  for (const std::string& cell : split_list(v))
    out.push_back(parse_double(key, cell));
  if (out.empty()) bad_key(key, "list must be non-empty");
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const std::string& cell : split_list(v))
    out.push_back(static_cast<int>(parse_int(key, cell)));
  if (out.empty()) bad_key(key, "list must be non-empty");
  return out;
}

std::string fmt_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, double>)
      out += fmt_double(xs[i]);
    else
      out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

void config_set(ExperimentConfig& cfg, const std::string& key,
                const std::string& value) {
  if (key == "n") {
    const long long n = parse_int(key, value);
    if (n < 1 || n > 3) bad_key(key, "dimension must be 1, 2 or 3");
    cfg.n = static_cast<int>(n);
  } else if (key == "N") {
    const long long N = parse_int(key, value);
    if (N < 8 || (N & (N - 1)))
      bad_key(key, "points per axis must be a power of two >= 8");
    cfg.N = static_cast<std::size_t>(N);
  } else if (key == "L_box") {
    const double L = parse_double(key, value);
    if (!(L > 0.0)) bad_key(key, "box length must be > 0");
    cfg.L_box = L;
  } else if (key == "operator") {
    if (value != "free" && value != "schrodinger" && value != "dirichlet")
      bad_key(key, "must be one of free, schrodinger, dirichlet");
    cfg.op = value;
  } else if (key == "m") {
    const long long m = parse_int(key, value);
    if (m < 2 || m % 2) bad_key(key, "order must be an even integer >= 2");
    cfg.m = static_cast<int>(m);
  } else if (key == "potential") {
    cfg.potential = value;
  } else if (key == "mask") {
    cfg.mask = value;
  } else if (key == "t") {
    cfg.t_sweep = parse_double_list(key, value);
  } else if (key == "k") {
    cfg.k_sweep = parse_int_list(key, value);
    for (int k : cfg.k_sweep)
      if (k < 1) bad_key(key, "dyadic offsets must be >= 1");
  } else if (key == "p") {
    cfg.p_sweep = parse_double_list(key, value);
    for (double p : cfg.p_sweep)
      if (!(p >= 1.0)) bad_key(key, "exponents must be >= 1");
  } else if (key == "s") {
    cfg.s_sweep = parse_double_list(key, value);
  } else if (key == "c1") {
    const double c = parse_double(key, value);
    if (!(c > 1.0)) bad_key(key, "must be > 1");
    cfg.c1 = c;
  } else if (key == "stability") {
    const double f = parse_double(key, value);
    if (!(f > 1.0)) bad_key(key, "stability factor must be > 1");
    cfg.stability = f;
  } else if (key == "probes") {
    const long long p = parse_int(key, value);
    if (p < 0) bad_key(key, "probe count must be >= 0");
    cfg.probes = static_cast<int>(p);
  } else if (key == "seed") {
    const long long s = parse_int(key, value);
    if (s < 0) bad_key(key, "seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "out") {
    if (value.empty()) bad_key(key, "output directory must be non-empty");
    cfg.out_dir = value;
  } else {
    bad_key(key, "unknown key");
  }
}

void config_validate(const ExperimentConfig& cfg) {
  if (cfg.t_sweep.empty()) bad_key("t", "sweep must be non-empty");
  if (cfg.k_sweep.empty()) bad_key("k", "sweep must be non-empty");
  if (cfg.p_sweep.empty()) bad_key("p", "sweep must be non-empty");
  if (cfg.s_sweep.empty()) bad_key("s", "sweep must be non-empty");
  if (!(cfg.c1 > 1.0)) bad_key("c1", "must be > 1");
  if (cfg.N < 8 || (cfg.N & (cfg.N - 1)))
    bad_key("N", "points per axis must be a power of two >= 8");
  if (cfg.n < 1 || cfg.n > 3) bad_key("n", "dimension must be 1, 2 or 3");
  if (!(cfg.L_box > 0.0)) bad_key("L_box", "box length must be > 0");
}

ExperimentConfig load_config(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  return load_config(ExperimentConfig{}, path, overrides);
}

ExperimentConfig load_config(
    const ExperimentConfig& base, const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  ExperimentConfig cfg = base;

  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not readable: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                    ": expected key = value, got '" + line +
                                    "'");
      config_set(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  if (const char* env = std::getenv("SCHROLAB_OUT"); env && *env)
    config_set(cfg, "out", env);

  for (const auto& [key, value] : overrides) config_set(cfg, key, value);

  config_validate(cfg);
  return cfg;
}

std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& cfg) {
  return {
      {"n", std::to_string(cfg.n)},
      {"N", std::to_string(cfg.N)},
      {"L_box", fmt_double(cfg.L_box)},
      {"operator", cfg.op},
      {"m", std::to_string(cfg.m)},
      {"potential", cfg.potential},
      {"mask", cfg.mask},
      {"t", join(cfg.t_sweep)},
      {"k", join(cfg.k_sweep)},
      {"p", join(cfg.p_sweep)},
      {"s", join(cfg.s_sweep)},
      {"c1", fmt_double(cfg.c1)},
      {"stability", fmt_double(cfg.stability)},
      {"probes", std::to_string(cfg.probes)},
      {"seed", std::to_string(cfg.seed)},
      {"out", cfg.out_dir},
  };
}

void RunManifest::add(const std::string& key, const std::string& value) {
  entries.emplace_back(key, value);
}

void RunManifest::add(const std::string& key, double value) {
  entries.emplace_back(key, fmt_double(value));
}

void write_manifest(const RunManifest& man, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << "subcommand=" << man.subcommand << "\n";
  out << "version=" << man.version << "\n";
  for (const auto& [key, value] : man.entries)
    out << key << "=" << value << "\n";
  out << "pass=" << (man.pass ? 1 : 0) << "\n";
  if (!out) throw std::runtime_error("manifest write failed: " + path);
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%S", &tm);
  return buf;
}

}  // namespace schrolab
