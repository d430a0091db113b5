// Benchmark of the OpenMP kernels against their serial references.  Each
// row times both variants on the same input and reports the speedup plus
// an agreement check (bit-identical where the chunked reductions promise
// it, small tolerance where the reference uses a different algorithm).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "schrolab/fft.hpp"
#include "schrolab/field.hpp"
#include "schrolab/grid.hpp"
#include "schrolab/norms.hpp"
#include "schrolab/operators.hpp"
#include "schrolab/parallel.hpp"
#include "schrolab/rng.hpp"
#include "schrolab/symbols.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(F&& body) {
  double best = 1e300;
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = Clock::now();
    body();
    const auto t1 = Clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial_ms, double parallel_ms, double diff,
         double tol) {
  std::printf("%-24s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   "
              "max diff %.3g %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms, diff,
              diff <= tol ? "(ok)" : "(MISMATCH)");
}

schrolab::Field random_field(const schrolab::Grid& g, std::uint64_t seed) {
  schrolab::Rng rng(seed);
  schrolab::Field f(g);
  for (auto& v : f.values()) v = {rng.gaussian(), rng.gaussian()};
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace schrolab;
  const std::size_t N = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 512;
  std::printf("threads: %d, 2-D grid %zu x %zu\n", hardware_threads(), N, N);

  Grid g = make_grid(2, N, static_cast<double>(N));
  Field f = random_field(g, 42);

  {  // ball counting: chunked kernel vs plain loop
    const double r = g.box_length() / 5.0;
    double vs = 0, vp = 0;
    const double ts =
        time_ms([&] { vs = ref::ball_volume(g, f.size() / 2, r); });
    const double tp = time_ms(
        [&] { vp = ball_volume(g, f.size() / 2, r, Exec::parallel); });
    row("ball_volume", ts, tp, std::abs(vs - vp), 0.0);
  }

  {  // FFT: line-parallel vs serial lines (identical arithmetic)
    Field a = f, b = f;
    const double ts = time_ms([&] {
      a = f;
      fft_nd(a.values(), g.dim(), N, false, Exec::serial);
    });
    const double tp = time_ms([&] {
      b = f;
      fft_nd(b.values(), g.dim(), N, false, Exec::parallel);
    });
    row("fft_nd forward", ts, tp, max_abs_diff(a, b), 0.0);
  }

  {  // L2 norm: chunked reduction, same chunk layout in both modes
    double vs = 0, vp = 0;
    const double ts = time_ms([&] { vs = lp_norm(f, 2.0, Exec::serial); });
    const double tp = time_ms([&] { vp = lp_norm(f, 2.0, Exec::parallel); });
    row("lp_norm p=2", ts, tp, std::abs(vs - vp), 0.0);
  }

  {  // spectral calculus end to end
    OperatorModel L = make_free_model(g, 2);
    const SymbolFn F = heat_symbol(0.5);
    Field us, up;
    const double ts =
        time_ms([&] { us = apply_function(L, F, f, Exec::serial); });
    const double tp =
        time_ms([&] { up = apply_function(L, F, f, Exec::parallel); });
    row("apply heat symbol", ts, tp, max_abs_diff(us, up), 0.0);
  }

  {  // weak quasinorm: sort-based kernel vs threshold-scan reference
    Grid gs = make_grid(1, std::min<std::size_t>(N * 4, 4096),
                        static_cast<double>(N));
    Field fs = random_field(gs, 7);
    double vs = 0, vp = 0;
    const double ts = time_ms([&] { vs = ref::weak_lp_quasinorm(fs, 1.0); });
    const double tp =
        time_ms([&] { vp = weak_lp_quasinorm(fs, 1.0).weak_quasinorm; });
    row("weak quasinorm", ts, tp, std::abs(vs - vp) / vs, 1e-12);
  }

  return 0;
}
