// Command-line driver: each subcommand resolves a configuration (built-in
// per-subcommand defaults < config file < SCHROLAB_OUT < flags), runs the
// corresponding experiments, writes one CSV (and possibly SVG) per report
// plus a manifest, and exits 0 only if every bound held.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "schrolab/config.hpp"
#include "schrolab/experiments.hpp"
#include "schrolab/svg.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using schrolab::ExperimentConfig;
using schrolab::ExperimentReport;

struct Shared {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
};

void add_shared_options(CLI::App* cmd, Shared& sh) {
  cmd->add_option("--config", sh.config_path,
                  "config file with `key = value` lines");
  struct Key {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const Key keys[] = {
      {"--n", "n", "torus dimension (1-3)"},
      {"--N", "N", "points per axis (power of two)"},
      {"--L_box", "L_box", "box side length"},
      {"--operator", "operator", "free | schrodinger | dirichlet"},
      {"--m", "m", "operator order (even, >= 2)"},
      {"--potential", "potential", "potential label for operator=schrodinger"},
      {"--mask", "mask", "mask label for operator=dirichlet"},
      {"--t", "t", "comma-separated time sweep"},
      {"--k", "k", "comma-separated dyadic scale offsets"},
      {"--p", "p", "comma-separated Lebesgue exponents"},
      {"--s", "s", "comma-separated smoothness orders"},
      {"--c1", "c1", "tail radius factor (> 1)"},
      {"--stability", "stability", "max tolerated spread of a 'stable' constant"},
      {"--probes", "probes", "number of seeded sparse probes"},
      {"--seed", "seed", "RNG seed"},
      {"--out", "out", "output directory"},
  };
  for (const Key& k : keys) {
    cmd->add_option_function<std::string>(
        k.flag,
        [&sh, key = k.key](const std::string& v) {
          sh.overrides.emplace_back(key, v);
        },
        k.help);
  }
}

using Tune = std::function<void(ExperimentConfig&)>;

ExperimentConfig resolve(const Shared& sh, const Tune& tune) {
  ExperimentConfig base;
  if (tune) tune(base);
  return schrolab::load_config(base, sh.config_path, sh.overrides);
}

// per-subcommand retuned defaults (flags/config still override)
const Tune tune_none = [](ExperimentConfig&) {};
const Tune tune_sharpness = [](ExperimentConfig& c) {
  c.N = std::size_t{1} << 16;
  c.L_box = 512.0;
  c.t_sweep = {4, 8, 16, 32, 64};
};
const Tune tune_weak11 = [](ExperimentConfig& c) {
  c.N = std::size_t{1} << 16;
  c.L_box = 512.0;
  c.t_sweep = {2, 4, 8, 16, 32};
};
const Tune tune_tail = [](ExperimentConfig& c) {
  c.N = std::size_t{1} << 16;
  c.L_box = 4096.0;
  c.t_sweep = {1, 4, 16};
};
const Tune tune_harnack = [](ExperimentConfig& c) {
  c.N = 1024;
  c.L_box = 1.0;
  c.t_sweep = {0.25, 1, 4};
};
const Tune tune_besov = [](ExperimentConfig& c) {
  c.t_sweep = {0, 1, 8};
  c.k_sweep = {1, 2, 3};
};

Tune kernel_tune(const std::string& kind) {
  return kind == "harnack_annulus" ? tune_harnack : tune_none;
}

const std::vector<std::string> kKernelKinds = {
    "resolvent_decay", "harnack_annulus", "q_kernel", "complex_time",
    "weighted_multiplier"};

int emit(const std::string& sub, const ExperimentConfig& cfg,
         const std::vector<ExperimentReport>& reports) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const std::string ts = schrolab::timestamp_utc();

  schrolab::RunManifest man;
  man.subcommand = sub;
  man.version = kVersion;
  for (const auto& [k, v] : schrolab::config_echo(cfg))
    man.add("config." + k, v);

  bool all_pass = true;
  for (const ExperimentReport& rep : reports) {
    char stem[256];
    std::snprintf(stem, sizeof stem, "%s_%dd_N%zu_%s", rep.kind.c_str(),
                  cfg.n, cfg.N, ts.c_str());
    const fs::path csv_path = fs::path(cfg.out_dir) / (std::string(stem) + ".csv");
    {
      std::ofstream out(csv_path);
      if (!out) throw std::runtime_error("cannot write " + csv_path.string());
      out << schrolab::report_csv(rep);
    }
    man.add("file." + rep.kind + ".csv", csv_path.filename().string());
    if (!rep.plot.points.empty()) {
      const fs::path svg_path =
          fs::path(cfg.out_dir) / (std::string(stem) + ".svg");
      schrolab::write_loglog_svg(rep.plot, svg_path.string());
      man.add("file." + rep.kind + ".svg", svg_path.filename().string());
    }
    man.add("result." + rep.kind, rep.pass ? "pass" : "fail");
    for (const auto& [k, v] : rep.summary)
      man.add("summary." + rep.kind + "." + k, v);

    std::printf("[%s] %-20s %s\n", rep.pass ? "PASS" : "FAIL",
                rep.kind.c_str(), rep.detail.c_str());
    if (!rep.pass && !rep.rows.empty()) {
      const auto worst = std::max_element(
          rep.rows.begin(), rep.rows.end(),
          [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
      std::printf("       worst row: %s measured=%.6g bound=%.6g ratio=%.6g\n",
                  worst->params.c_str(), worst->measured, worst->bound,
                  worst->ratio);
    }
    all_pass = all_pass && rep.pass;
  }

  man.pass = all_pass;
  const fs::path man_path = fs::path(cfg.out_dir) / "manifest.txt";
  schrolab::write_manifest(man, man_path.string());
  std::printf("%s: %s (%zu report%s, outputs in %s)\n", sub.c_str(),
              all_pass ? "all bounds hold" : "BOUND VIOLATION", reports.size(),
              reports.size() == 1 ? "" : "s", cfg.out_dir.c_str());
  return all_pass ? 0 : 1;
}

int run_subcommand(const std::string& sub, const Shared& sh,
                   const std::string& kernel_kind) {
  std::vector<ExperimentReport> reports;
  ExperimentConfig primary;

  if (sub == "sharpness") {
    primary = resolve(sh, tune_sharpness);
    reports.push_back(run_sharpness(primary));
  } else if (sub == "weak11") {
    primary = resolve(sh, tune_weak11);
    reports.push_back(run_weak11_upper(primary));
  } else if (sub == "lp-bound") {
    primary = resolve(sh, tune_none);
    reports.push_back(run_lp_bound(primary));
  } else if (sub == "kernel-check") {
    bool first = true;
    for (const std::string& kind : kKernelKinds) {
      if (kernel_kind != "all" && kernel_kind != kind) continue;
      ExperimentConfig cfg = resolve(sh, kernel_tune(kind));
      if (first) primary = cfg, first = false;
      reports.push_back(schrolab::run_kernel_check(kind, cfg));
    }
  } else if (sub == "tail-integral") {
    primary = resolve(sh, tune_tail);
    reports.push_back(run_tail_integral(primary));
  } else if (sub == "besov-envelope") {
    primary = resolve(sh, tune_besov);
    reports.push_back(run_besov_submult(primary));
    reports.push_back(run_besov_envelope(primary));
  } else if (sub == "cz-check") {
    primary = resolve(sh, tune_none);
    reports.push_back(run_cz_check(primary));
    reports.push_back(run_cz_heat_l2(primary));
    reports.push_back(run_partition_check(primary));
  } else if (sub == "selfcheck") {
    primary = resolve(sh, tune_none);
    reports = schrolab::run_selfcheck(primary);
  } else if (sub == "all") {
    primary = resolve(sh, tune_sharpness);
    reports.push_back(run_sharpness(primary));
    reports.push_back(run_weak11_upper(resolve(sh, tune_weak11)));
    reports.push_back(run_lp_bound(resolve(sh, tune_none)));
    reports.push_back(run_calculus_oracle(resolve(sh, tune_none)));
    reports.push_back(run_partition_check(resolve(sh, tune_none)));
    reports.push_back(run_cz_check(resolve(sh, tune_none)));
    reports.push_back(run_cz_heat_l2(resolve(sh, tune_none)));
    reports.push_back(run_tail_integral(resolve(sh, tune_tail)));
    for (const std::string& kind : kKernelKinds)
      reports.push_back(
          schrolab::run_kernel_check(kind, resolve(sh, kernel_tune(kind))));
    reports.push_back(run_feynman_kac(resolve(sh, tune_none)));
    reports.push_back(run_besov_submult(resolve(sh, tune_besov)));
    reports.push_back(run_besov_envelope(resolve(sh, tune_besov)));
  } else {
    throw std::invalid_argument("unknown subcommand: " + sub);
  }

  return emit(sub, primary, reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "schrolab: empirical checks of dispersive spectral-multiplier bounds "
      "on discrete tori"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(0, 1);

  Shared sh;
  std::string kernel_kind = "all";

  struct Sub {
    const char* name;
    const char* help;
  };
  static const Sub subs[] = {
      {"sharpness", "lower-bound growth of the smoothed propagator"},
      {"weak11", "upper weak-L1 growth over the probe family"},
      {"lp-bound", "Lp operator ratios of the smoothed propagator"},
      {"kernel-check", "kernel-level decay/oscillation/mass estimates"},
      {"tail-integral", "off-diagonal mass of the compact multiplier piece"},
      {"besov-envelope", "smoothness-norm submultiplicativity and envelopes"},
      {"cz-check", "dyadic decomposition invariants and smoothed bad parts"},
      {"selfcheck", "reduced-size pass over every experiment"},
      {"all", "full-size pass over every experiment"},
  };
  for (const Sub& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_shared_options(cmd, sh);
    if (std::string(s.name) == "kernel-check")
      cmd->add_option("--kind", kernel_kind, "which kernel check to run")
          ->check(CLI::IsMember({"all", "resolvent_decay", "harnack_annulus",
                                 "q_kernel", "complex_time",
                                 "weighted_multiplier"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help is fine, bad usage is 2
  }

  if (app.get_subcommands().empty()) {
    std::puts(app.help().c_str());
    return 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    return run_subcommand(sub, sh, kernel_kind);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
