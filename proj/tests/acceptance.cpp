// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria.  argv[1] is the path to the CLI binary (used by the
// final criterion).  Full-size sweeps, so this runs for a few minutes on
// one core and much faster with OpenMP.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "schrolab/experiments.hpp"

using namespace schrolab;

namespace {

int failures = 0;

void verdict(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %2d  %-24s  %s  %s\n", id, name,
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void criterion(int id, const char* name,
               const std::function<ExperimentReport()>& body) {
  try {
    ExperimentReport rep = body();
    verdict(id, name, rep.pass, rep.detail);
  } catch (const std::exception& e) {
    verdict(id, name, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  // 1. growth of the weak-L1 size of the smoothed propagator is genuinely
  //    ~ t^{1/2} in one dimension: fitted slope within [0.38, 0.62],
  //    r^2 >= 0.9, and the dispersive annulus floor strictly positive.
  criterion(1, "sharpness_growth", [] {
    ExperimentConfig c;
    c.N = std::size_t{1} << 16;
    c.L_box = 512.0;
    c.t_sweep = {4, 8, 16, 32, 64};
    return run_sharpness(c);
  });

  // 2. the upper weak-L1 growth over the whole probe family stays below
  //    exponent 0.62 and brackets the packet-probe lower fit within 0.25.
  criterion(2, "weak11_upper_growth", [] {
    ExperimentConfig c;
    c.N = std::size_t{1} << 16;
    c.L_box = 512.0;
    c.t_sweep = {2, 4, 8, 16, 32};
    return run_weak11_upper(c);
  });

  // 3. p = 2 operator ratios equal 1 to 1e-10 for every integer t up to
  //    1024 (the fourier route is exactly unitary there).
  criterion(3, "l2_flatness", [] {
    ExperimentConfig c;
    c.p_sweep = {2};
    c.t_sweep.clear();
    for (int t = 0; t <= 1024; ++t) c.t_sweep.push_back(t);
    return run_lp_bound(c);
  });

  // 4. dense eigensolver calculus and FFT calculus agree to 1e-9 on the
  //    same operator (two independent numerical routes).
  criterion(4, "calculus_oracle", [] { return run_calculus_oracle({}); });

  // 5. the dyadic partition of unity telescopes to 1 within 1e-12 over
  //    twelve decades.
  criterion(5, "partition_of_unity", [] { return run_partition_check({}); });

  // 6. decomposition invariants hold for 50 seeded fields at three
  //    heights: constants, disjointness, reconstruction.
  criterion(6, "cz_invariants", [] { return run_cz_check({}); });

  // 7. the smoothed-bad-part constant is stable (max/min < 3) across
  //    structured inputs on two grid sizes.
  criterion(7, "cz_heat_l2", [] {
    ExperimentConfig c;
    c.N = 1024;
    return run_cz_heat_l2(c);
  });

  // 8. normalized off-diagonal tails of the compact piece are uniformly
  //    of one size over the (k, t) sweep (n = 1, m = 2, c1 = 2).
  criterion(8, "tail_integral", [] {
    ExperimentConfig c;
    c.N = std::size_t{1} << 16;
    c.L_box = 4096.0;
    c.t_sweep = {1, 4, 16};
    return run_tail_integral(c);
  });

  // 9. resolvent-power kernels oscillate by at most 2 * 5^{n-1} on every
  //    dyadic annulus {R <= d <= 2R} down to 4h.
  criterion(9, "harnack_annulus", [] {
    ExperimentConfig c;
    c.N = 1024;
    c.L_box = 1.0;
    c.t_sweep = {0.25, 1, 4};
    return run_kernel_check("harnack_annulus", c);
  });

  // 10. heat flow with V >= 0 (and Dirichlet subdomains) is entrywise
  //     nonnegative and dominated by the free flow, to 1e-10.
  criterion(10, "feynman_kac", [] { return run_feynman_kac({}); });

  // 11. twisted-diffusion radial moments track (1+|tau|)^s / (R^s V):
  //     normalized values vary by less than a factor 10.
  criterion(11, "complex_time", [] {
    return run_kernel_check("complex_time", {});
  });

  // 12. the smoothness norm is submultiplicative on ten pairs (to 1e-5)
  //     and the modulated band pieces track the growth envelope within a
  //     factor 10.
  criterion(12, "besov_norms", [] {
    ExperimentConfig c;
    c.t_sweep = {0, 1, 8};
    c.k_sweep = {1, 2, 3};
    ExperimentReport a = run_besov_submult(c);
    ExperimentReport b = run_besov_envelope(c);
    ExperimentReport both;
    both.kind = "besov_norms";
    both.pass = a.pass && b.pass;
    both.detail = a.pass && b.pass
                      ? "pass"
                      : (!a.pass ? "submultiplicativity: " + a.detail
                                 : "envelope: " + b.detail);
    return both;
  });

  // 13. the CLI selfcheck (reduced sizes, every experiment kind) exits 0
  //     in under 60 seconds.
  {
    bool pass = false;
    std::string detail;
    if (argc < 2) {
      detail = "CLI binary path not passed as argv[1]";
    } else {
      namespace fs = std::filesystem;
      const fs::path out =
          fs::temp_directory_path() / "schrolab_acceptance_selfcheck";
      const fs::path log = out / "selfcheck.log";
      fs::create_directories(out);
      char cmd[1024];
      std::snprintf(cmd, sizeof cmd, "\"%s\" selfcheck --out \"%s\" > \"%s\" 2>&1",
                    argv[1], out.string().c_str(), log.string().c_str());
      const auto t0 = std::chrono::steady_clock::now();
      const int rc = std::system(cmd);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
      const bool manifest_ok = fs::exists(out / "manifest.txt");
      pass = code == 0 && secs < 60.0 && manifest_ok;
      detail = "exit " + std::to_string(code) + ", " +
               std::to_string(secs).substr(0, 5) + " s" +
               (manifest_ok ? "" : ", manifest missing") +
               (pass ? "" : "; log: " + log.string());
    }
    verdict(13, "cli_selfcheck", pass, detail);
  }

  std::printf("%d of 13 criteria passed\n", 13 - failures);
  return failures;
}
