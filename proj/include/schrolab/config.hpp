#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace schrolab {

// Resolved experiment parameters.  Defaults are the shipped configuration;
// file values, the SCHROLAB_OUT environment variable and flag overrides are
// layered on top in that order (last writer wins).
struct ExperimentConfig {
  int n = 1;                       // torus dimension
  std::size_t N = 4096;            // points per axis (power of two)
  double L_box = 256.0;            // box side length
  std::string op = "free";         // free | schrodinger | dirichlet
  int m = 2;                       // operator order (even)
  std::string potential = "zero";  // potential label for op = schrodinger
  std::string mask = "lshape";     // mask label for op = dirichlet
  std::vector<double> t_sweep = {1, 2, 4, 8, 16, 32, 64};
  std::vector<int> k_sweep = {1, 2, 3, 4};  // dyadic offsets above k0
  std::vector<double> p_sweep = {1, 2, 4};
  std::vector<double> s_sweep = {1.3};
  double c1 = 2.0;         // tail-radius factor, must stay > 1
  double stability = 10.0; // declared max/min spread for "constant is stable"
  int probes = 32;         // seeded sparse probes in the probe family
  std::uint64_t seed = 7;
  std::string out_dir = ".";
};

// Set a single key from its text form (shared by file lines and flags).
// Unknown keys, unparsable values and per-key range violations throw
// std::invalid_argument naming the key.
void config_set(ExperimentConfig& cfg, const std::string& key,
                const std::string& value);

// Cross-field invariants: sweep lists non-empty, c1 > 1, grid well formed.
void config_validate(const ExperimentConfig& cfg);

// path may be empty (defaults only).  File format: one `key = value` per
// line, `#` starts a comment, lists are comma-separated.  Precedence:
// defaults < file < SCHROLAB_OUT < overrides.
ExperimentConfig load_config(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides);

// Same, but layered on top of `base` instead of the struct defaults
// (subcommands with retuned default sweeps start from their own base).
ExperimentConfig load_config(
    const ExperimentConfig& base, const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides);

// Every resolved field as (key, value) text pairs, in declaration order —
// echoed into the manifest.
std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& cfg);

// Flat key=value run record.
struct RunManifest {
  std::string subcommand;
  std::string version;
  std::vector<std::pair<std::string, std::string>> entries;
  bool pass = false;

  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
};

void write_manifest(const RunManifest& man, const std::string& path);

// UTC wall-clock tag for file names (YYYYmmddTHHMMSS); never written into
// CSV bodies.
std::string timestamp_utc();

}  // namespace schrolab
