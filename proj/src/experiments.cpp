#include "schrolab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "schrolab/cz.hpp"
#include "schrolab/fft.hpp"
#include "schrolab/generators.hpp"
#include "schrolab/norms.hpp"
#include "schrolab/parallel.hpp"
#include "schrolab/rng.hpp"
#include "schrolab/symbols.hpp"

namespace schrolab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::string num17(double v) { return fmt("%.17g", v); }

// max/min over a list of strictly positive finite values; +inf when any
// entry is degenerate, so a collapsed row always fails a spread check.
double spread_ratio(const std::vector<double>& v) {
  if (v.empty()) return kInf;
  double lo = kInf, hi = 0.0;
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) return kInf;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi / lo;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

// plain least squares on the given coordinates (callers pass logs where
// they want a power law)
LineFit fit_line(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2)
    throw std::invalid_argument("fit_line: need at least 2 points");
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (auto& [x, y] : pts) sx += x, sy += y;
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0;
    for (auto& [x, y] : pts) {
      const double e = y - (out.intercept + out.slope * x);
      ss_res += e * e;
    }
    out.r2 = std::max(0.0, 1.0 - ss_res / syy);
  }
  return out;
}

std::size_t next_pow2(double x) {
  std::size_t p = 1;
  while (static_cast<double>(p) < x) p <<= 1;
  return p;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void require_free(const ExperimentConfig& cfg, const char* kind) {
  if (cfg.op != "free")
    throw std::invalid_argument(std::string(kind) +
                                ": needs operator = free (fourier "
                                "calculus); got '" +
                                cfg.op + "'");
}

MultiIndex center_index(const Grid& g) {
  MultiIndex c{0, 0, 0};
  for (int a = 0; a < g.dim(); ++a)
    c[a] = static_cast<std::int64_t>(g.points_per_axis() / 2);
  return c;
}

double weak1(const Field& f) { return weak_lp_quasinorm(f, 1.0).weak_quasinorm; }

Field gaussian_field(const Grid& g, std::uint64_t seed) {
  Rng rng(seed);
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = cplx(rng.gaussian(), rng.gaussian());
  return f;
}

void set_verdict(ExperimentReport& rep, bool ok, const std::string& why) {
  rep.pass = ok;
  rep.detail = ok ? "pass" : why;
}

}  // namespace

std::string report_csv(const ExperimentReport& rep) {
  std::string out = experiment_csv_header;
  out += '\n';
  for (const auto& r : rep.rows) {
    out += r.params;
    out += ',';
    out += num17(r.measured);
    out += ',';
    out += num17(r.bound);
    out += ',';
    out += num17(r.ratio);
    out += '\n';
  }
  return out;
}

Field bandlimited_probe(const Grid& g) {
  auto [phi0, phi1] = cutoff_pair();
  (void)phi0;
  Field S(g);
  const std::size_t N = g.points_per_axis();
  for (std::size_t i = 0; i < S.size(); ++i) {
    double q = 0.0;
    std::size_t rest = i;
    for (int a = 0; a < g.dim(); ++a) {
      const double xi = lattice_frequency(g, rest % N);
      rest /= N;
      q += xi * xi;
    }
    S[i] = phi1(std::sqrt(q)) / (1.0 + q);
  }
  Field f = spectral_transform(S, SpectralDir::inverse);
  const double mass = lp_norm(f, 1.0);
  if (mass == 0.0) return Field(g);  // every frequency sits below the cutoff
  f *= cplx(1.0 / mass);
  return f;
}

Field delta_probe(const Grid& g, std::size_t flat) {
  Field f(g);
  f[flat] = cplx(std::pow(g.spacing(), -g.dim()));
  return f;
}

Field sparse_probe(const Grid& g, std::uint64_t seed) {
  Rng rng(seed);
  Field f(g);
  for (int j = 0; j < 16; ++j)
    f[rng.integer(f.size())] += cplx(rng.gaussian(), rng.gaussian());
  const double mass = lp_norm(f, 1.0);
  if (mass == 0.0) return delta_probe(g, 0);
  f *= cplx(1.0 / mass);
  return f;
}

ExperimentReport run_sharpness(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "sharpness";
  require_free(cfg, "sharpness");
  if (cfg.t_sweep.empty())
    throw std::invalid_argument("sharpness: empty t sweep");
  const auto ts = sorted(cfg.t_sweep);
  if (ts.front() <= 0.0)
    throw std::invalid_argument("sharpness: t sweep must be positive");
  if (cfg.L_box < 4.0 * (1.0 + ts.back()))
    throw std::invalid_argument(
        fmt("sharpness: L_box = %g too small; the wave packet needs "
            "L_box >= 4 (1 + max t) = %g",
            cfg.L_box, 4.0 * (1.0 + ts.back())));

  Grid g = make_grid(cfg.n, cfg.N, cfg.L_box);
  // the wave-packet lower bound is second-order dispersion
  OperatorModel L = make_free_model(g, 2);
  const double s = 0.5 * cfg.n;
  Field f = bandlimited_probe(g);
  if (lp_norm(f, 1.0) == 0.0)
    throw std::invalid_argument(
        "sharpness: grid resolves no frequencies above the probe cutoff");

  std::vector<std::pair<double, double>> pts;
  for (double t : ts) {
    Field u = apply_function(L, propagator_symbol(t, s), f);
    const double W = weak1(u);
    const double b = std::pow(t, s);
    rep.rows.push_back({fmt("t=%.17g", t), W, b, W / b});
    pts.push_back({t, W});
  }
  FitReport fit = fit_power_law(pts);

  // pointwise dispersive floor on {2t <= |x| < 3t} at the middle time
  const double tm = ts[ts.size() / 2];
  Field um = apply_function(L, propagator_symbol(tm, s), f);
  const double C2 = 2.0;
  double cmin = kInf;
  std::size_t npts = 0;
  for (std::size_t i = 0; i < um.size(); ++i) {
    const double d = torus_distance(g, i, 0);
    if (d >= C2 * tm && d < (1.0 + C2) * tm) {
      cmin = std::min(cmin, std::abs(um[i]) * std::pow(d, s + 1.0) / tm);
      ++npts;
    }
  }
  if (npts == 0) cmin = 0.0;

  const double target = 0.5 * cfg.n;
  rep.summary["slope"] = fit.slope;
  rep.summary["r2"] = fit.r_squared;
  rep.summary["annulus_floor"] = cmin;
  rep.summary["annulus_points"] = static_cast<double>(npts);
  const bool ok = fit.slope >= target - 0.12 && fit.slope <= target + 0.12 &&
                  fit.r_squared >= 0.9 && cmin > 0.0;
  set_verdict(rep, ok,
              fmt("slope %.4f (target %.2f +- 0.12), r2 %.4f (>= 0.9), "
                  "annulus floor %.3g (> 0)",
                  fit.slope, target, fit.r_squared, cmin));

  rep.plot.title = "weak-L1 growth of the smoothed propagator";
  rep.plot.xlabel = "t";
  rep.plot.ylabel = "weak-L1 size";
  rep.plot.points = pts;
  rep.plot.fit_slope = fit.slope;
  rep.plot.fit_intercept = fit.intercept;
  rep.plot.ref_slope = target;
  return rep;
}

ExperimentReport run_weak11_upper(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "weak11_upper";
  require_free(cfg, "weak11_upper");
  if (cfg.t_sweep.size() < 3)
    throw std::invalid_argument("weak11_upper: need at least 3 sweep times");
  const auto ts = sorted(cfg.t_sweep);
  if (ts.front() <= 0.0)
    throw std::invalid_argument("weak11_upper: t sweep must be positive");

  Grid g = make_grid(cfg.n, cfg.N, cfg.L_box);
  OperatorModel L = make_free_model(g, cfg.m);
  const double s = 0.5 * cfg.n;

  // fixed probe family: coarse deltas, the bandlimited packet, seeded
  // sparse combs
  std::vector<Field> probes;
  const std::size_t N = g.points_per_axis();
  for (std::size_t j = 0; j < 4; ++j) {
    MultiIndex idx{static_cast<std::int64_t>(j * (N / 4)), 0, 0};
    probes.push_back(delta_probe(g, flat_index(g, idx)));
  }
  Field band = bandlimited_probe(g);
  if (lp_norm(band, 1.0) == 0.0)
    throw std::invalid_argument(
        "weak11_upper: grid resolves no frequencies above the probe cutoff");
  const std::size_t band_at = probes.size();
  probes.push_back(band);
  for (int i = 0; i < cfg.probes; ++i)
    probes.push_back(sparse_probe(g, cfg.seed + static_cast<std::uint64_t>(i)));

  std::vector<std::pair<double, double>> upper_pts, lower_pts;
  for (double t : ts) {
    const SymbolFn F = propagator_symbol(t, s);
    double worst = 0.0, band_w = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const double w = weak1(apply_function(L, F, probes[i]));
      worst = std::max(worst, w);
      if (i == band_at) band_w = w;
    }
    const double b = std::pow(1.0 + t, s);
    rep.rows.push_back({fmt("t=%.17g", t), worst, b, worst / b});
    upper_pts.push_back({1.0 + t, worst});
    lower_pts.push_back({1.0 + t, band_w});
  }

  FitReport up = fit_power_law(upper_pts);
  FitReport lo = fit_power_law(lower_pts);
  rep.summary["slope_upper"] = up.slope;
  rep.summary["slope_lower"] = lo.slope;
  rep.summary["r2_upper"] = up.r_squared;
  rep.summary["slope_gap"] = std::abs(up.slope - lo.slope);
  const bool ok =
      up.slope <= s + 0.12 && std::abs(up.slope - lo.slope) <= 0.25;
  set_verdict(rep, ok,
              fmt("upper slope %.4f (<= %.2f), lower slope %.4f, gap %.4f "
                  "(<= 0.25)",
                  up.slope, s + 0.12, lo.slope,
                  std::abs(up.slope - lo.slope)));

  rep.plot.title = "weak-L1 size over the probe family";
  rep.plot.xlabel = "1 + t";
  rep.plot.ylabel = "sup weak-L1 size";
  rep.plot.points = upper_pts;
  rep.plot.fit_slope = up.slope;
  rep.plot.fit_intercept = up.intercept;
  rep.plot.ref_slope = s;
  return rep;
}

ExperimentReport run_lp_bound(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "lp_bound";
  require_free(cfg, "lp_bound");
  if (cfg.t_sweep.empty() || cfg.p_sweep.empty())
    throw std::invalid_argument("lp_bound: empty sweep");
  const auto ts = sorted(cfg.t_sweep);
  const auto ps = sorted(cfg.p_sweep);

  Grid g = make_grid(cfg.n, cfg.N, cfg.L_box);
  OperatorModel L = make_free_model(g, cfg.m);

  std::vector<Field> probes;
  probes.push_back(delta_probe(g, flat_index(g, center_index(g))));
  Field band = bandlimited_probe(g);
  if (lp_norm(band, 1.0) > 0.0) probes.push_back(band);
  const int nsparse = std::min(cfg.probes, 8);
  for (int i = 0; i < nsparse; ++i)
    probes.push_back(sparse_probe(g, cfg.seed + 100 + i));

  bool ok = true;
  std::string why;
  double p2_worst = 0.0;
  std::vector<std::pair<double, double>> plot_pts;
  double plot_s = 0.0, plot_slope = std::nan(""), plot_icpt = 0.0;

  for (double p : ps) {
    const double s = cfg.n * std::abs(0.5 - 1.0 / p);
    std::vector<std::pair<double, double>> pts;
    for (double t : ts) {
      const SymbolFn F = propagator_symbol(t, s);
      double worst = 0.0;
      for (const Field& f : probes) {
        const double denom = lp_norm(f, p);
        worst = std::max(worst, lp_norm(apply_function(L, F, f), p) / denom);
      }
      const double b = std::pow(1.0 + t, s);
      rep.rows.push_back(
          {fmt("p=%.17g;t=%.17g", p, t), worst, b, worst / b});
      if (p == 2.0) {
        p2_worst = std::max(p2_worst, worst);
        if (worst > 1.0 + 1e-10 && ok) {
          ok = false;
          why = fmt("p=2 ratio %.17g exceeds 1 + 1e-10 at t=%g", worst, t);
        }
      }
      pts.push_back({1.0 + t, worst});
    }
    if (p > 1.0 && p != 2.0 && pts.size() >= 3) {
      FitReport fit = fit_power_law(pts);
      rep.summary[fmt("slope_p%g", p)] = fit.slope;
      if (fit.slope > s + 0.12 && ok) {
        ok = false;
        why = fmt("p=%g exponent %.4f exceeds s + 0.12 = %.4f", p, fit.slope,
                  s + 0.12);
      }
      plot_pts = pts;
      plot_s = s;
      plot_slope = fit.slope;
      plot_icpt = fit.intercept;
    }
  }
  rep.summary["p2_worst"] = p2_worst;
  set_verdict(rep, ok, why);

  if (!plot_pts.empty()) {
    rep.plot.title = "Lp operator ratio of the smoothed propagator";
    rep.plot.xlabel = "1 + t";
    rep.plot.ylabel = "sup ||u||_p / ||f||_p";
    rep.plot.points = plot_pts;
    rep.plot.fit_slope = plot_slope;
    rep.plot.fit_intercept = plot_icpt;
    rep.plot.ref_slope = plot_s;
  }
  return rep;
}

ExperimentReport run_calculus_oracle(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "calculus_oracle";
  const char* names[] = {"identity", "heat", "schrodinger", "resolvent",
                         "bump"};
  const SymbolFn symbols[] = {constant_symbol(1.0), heat_symbol(0.5),
                              propagator_symbol(1.0, 0.5),
                              resolvent_symbol(1.0, 1.0), dyadic_bump()};
  bool ok = true;
  std::string why;
  double worst_all = 0.0;
  for (std::size_t N : {std::size_t{16}, std::size_t{32}}) {
    Grid g = make_grid(1, N, static_cast<double>(N));  // h = 1
    OperatorModel A = make_potential_model(g, Field(g));
    for (int si = 0; si < 5; ++si) {
      double worst = 0.0;
      for (int trial = 0; trial < 5; ++trial) {
        Field f = gaussian_field(
            g, cfg.seed + 97 * static_cast<std::uint64_t>(trial) + N);
        Field dense = apply_function(A, symbols[si], f, Exec::serial);
        // same operator through the FFT: the stencil is circulant with
        // eigenvalue curve 4 h^{-2} sin^2(pi k / N)
        Field u = f;
        fft_nd(u.values(), 1, N, false, Exec::serial);
        for (std::size_t k = 0; k < N; ++k) {
          const double sn = std::sin(std::numbers::pi *
                                     static_cast<double>(k) /
                                     static_cast<double>(N));
          u[k] *= symbols[si](4.0 * sn * sn) / static_cast<double>(N);
        }
        fft_nd(u.values(), 1, N, true, Exec::serial);
        const double denom =
            std::max(lp_norm(dense, kInf, Exec::serial), 1e-300);
        worst = std::max(worst, max_abs_diff(dense, u) / denom);
      }
      worst_all = std::max(worst_all, worst);
      rep.rows.push_back({fmt("N=%zu;symbol=%s", N, names[si]), worst, 1e-9,
                          worst / 1e-9});
      if (worst > 1e-9 && ok) {
        ok = false;
        why = fmt("N=%zu symbol=%s rel error %.3g > 1e-9", N, names[si],
                  worst);
      }
    }
  }
  rep.summary["max_rel_error"] = worst_all;
  set_verdict(rep, ok, why);
  return rep;
}

ExperimentReport run_partition_check(const ExperimentConfig& cfg) {
  (void)cfg;
  ExperimentReport rep;
  rep.kind = "partition";
  const SymbolFn phi = dyadic_bump();
  const int samples = 10000;
  const double worst = chunked_max(
      samples, Exec::parallel, [&](std::size_t i0, std::size_t i1) {
        double w = 0.0;
        for (std::size_t i = i0; i < i1; ++i) {
          const double lam = std::pow(
              10.0, -6.0 + 12.0 * static_cast<double>(i) / (samples - 1));
          double sum = 0.0;
          for (int l = -60; l <= 60; ++l)
            sum += phi(std::ldexp(lam, -l)).real();
          w = std::max(w, std::abs(sum - 1.0));
        }
        return w;
      });
  rep.rows.push_back({fmt("lambda=logspace(1e-6,1e6);samples=%d", samples),
                      worst, 1e-12, worst / 1e-12});
  rep.summary["max_deviation"] = worst;
  set_verdict(rep, worst <= 1e-12,
              fmt("partition deviation %.3g > 1e-12", worst));
  return rep;
}

ExperimentReport run_cz_check(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "cz_check";
  const std::size_t N1 = std::min<std::size_t>(cfg.N, 512);
  const std::size_t N2 = std::min<std::size_t>(cfg.N, 32);
  Grid g1 = make_grid(1, N1, static_cast<double>(N1));
  Grid g2 = make_grid(2, N2, static_cast<double>(N2));
  const double factors[] = {1.5, 3.0, 10.0};

  bool ok = true;
  std::string why;
  double max_cii = 0, max_civ = 0, max_cl2 = 0, max_recon = 0, max_mean = 0;
  for (int i = 0; i < 50; ++i) {
    const bool planar = i >= 30;
    const Grid& g = planar ? g2 : g1;
    Field f = gaussian_field(g, cfg.seed + (planar ? 1000 : 0) + i);
    const double mean = lp_norm(f, 1.0) / g.total_measure();
    for (double fac : factors) {
      CZResult r = cz_decompose(f, fac * mean);
      CZConstantsReport c = cz_verify(r, f);
      max_cii = std::max(max_cii, c.c_ii);
      max_civ = std::max(max_civ, c.c_iv);
      max_cl2 = std::max(max_cl2, c.c_l2);
      max_recon = std::max(max_recon, c.recon_error);
      max_mean = std::max(max_mean, c.max_mean_abs);
      const double b = std::ldexp(1.0, g.dim());  // 2^n
      rep.rows.push_back({fmt("dim=%d;probe=%d;factor=%g", g.dim(), i, fac),
                          c.c_ii, b, c.c_ii / b});
      if (!(c.pass && r.constants.pass && r.overlap_bound == 1) && ok) {
        ok = false;
        why = fmt("decomposition invariants fail at dim=%d probe=%d "
                  "factor=%g (c_ii=%.3g c_iv=%.3g recon=%.3g)",
                  g.dim(), i, fac, c.c_ii, c.c_iv, c.recon_error);
      }
    }
  }
  rep.summary["max_c_ii"] = max_cii;
  rep.summary["max_c_iv"] = max_civ;
  rep.summary["max_c_l2"] = max_cl2;
  rep.summary["max_recon_error"] = max_recon;
  rep.summary["max_mean_abs"] = max_mean;
  set_verdict(rep, ok, why);
  return rep;
}

ExperimentReport run_cz_heat_l2(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "cz_heat_l2";
  require_free(cfg, "cz_heat_l2");
  const std::size_t N0 = std::min<std::size_t>(cfg.N, 1024);
  const int nprobe = std::max(4, std::min(10, cfg.probes));

  std::vector<double> cs;
  bool any_empty = false;
  for (std::size_t N : {N0, 2 * N0}) {
    Grid g = make_grid(1, N, 0.5 * static_cast<double>(N));  // h = 1/2
    OperatorModel L = make_free_model(g, cfg.m);
    const double h = g.spacing();
    for (int pi = 0; pi < nprobe; ++pi) {
      Rng rng(cfg.seed + 131 * static_cast<std::uint64_t>(pi) + N);
      Field f(g);
      // Half-filled blocks at dyadic widths, each aligned to a dyadic cell
      // and confined to its own quarter of the circle.  With the stopping
      // height fixed below (not derived from the field mean) every block is
      // selected exactly at its own cell on every grid: the cell average is
      // 1.6x the height and every ancestor is at most 0.85x, so the random
      // draw moves the measured constant only through the small amplitude
      // jitter.  A fully filled cell would be absorbed by the cube average
      // and leave the mean-zero remainder with nothing but noise.
      const double lam = 0.05;
      std::vector<std::size_t> widths;
      for (std::size_t w : {std::size_t{128}, std::size_t{32}, std::size_t{8}})
        if (w <= N / 4) widths.push_back(w);
      const std::size_t quarters[3] = {0, 2, 3};
      for (std::size_t wi = 0; wi < widths.size(); ++wi) {
        const std::size_t w = widths[wi];
        const std::size_t q0 = quarters[wi] * (N / 4);
        const std::size_t pos = q0 + w * rng.integer((N / 4) / w);
        const double cell_avg = 1.6 * lam * (1.0 + 0.1 * rng.uniform());
        for (std::size_t c = 0; c < w / 2; ++c) f[pos + c] += 2.0 * cell_avg;
      }
      for (std::size_t c = 0; c < N; ++c)
        f[c] += std::abs(rng.gaussian()) * lam * h / 16.0;

      const double l1 = lp_norm(f, 1.0);
      CZResult r = cz_decompose(f, lam);
      auto buckets = cz_scale_buckets(r);
      Field S(g);
      const int k0 = 0;  // t = 0 regime
      bool used = false;
      for (auto& [k, bsum] : buckets) {
        if (k <= k0) continue;
        S += apply_function(L, heat_symbol(std::ldexp(1.0, cfg.m * k)), bsum);
        used = true;
      }
      if (!used) any_empty = true;
      const double C = lp_norm(S, 2.0) / std::sqrt(lam * l1);
      rep.rows.push_back({fmt("N=%zu;probe=%d", N, pi), C, 1.0, C});
      cs.push_back(C);
    }
  }
  const double spread = spread_ratio(cs);
  rep.summary["c_min"] = *std::min_element(cs.begin(), cs.end());
  rep.summary["c_max"] = *std::max_element(cs.begin(), cs.end());
  rep.summary["spread"] = spread;
  const bool ok = !any_empty && spread < 3.0;
  set_verdict(rep, ok,
              fmt("smoothed-bad-part constant spread %.3g (< 3 required)%s",
                  spread, any_empty ? "; a probe produced no coarse cubes" : ""));
  return rep;
}

ExperimentReport run_tail_integral(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "tail_integral";
  require_free(cfg, "tail_integral");
  if (cfg.t_sweep.empty() || cfg.k_sweep.empty())
    throw std::invalid_argument("tail_integral: empty sweep");
  const auto ts = sorted(cfg.t_sweep);
  auto ks = cfg.k_sweep;
  std::sort(ks.begin(), ks.end());

  // largest annulus radius must fit inside the torus
  double rmax = 0.0;
  for (double t : ts) {
    const int k0 = time_scale_index(t);
    rmax = std::max(rmax, cfg.c1 * std::sqrt(1.0 + std::abs(t)) *
                              std::ldexp(1.0, k0 + ks.back()));
  }
  if (rmax >= 0.5 * cfg.L_box)
    throw std::invalid_argument(
        fmt("tail_integral: largest radius %g does not fit in half the box "
            "(%g); enlarge L_box or shrink the (k, t) sweep",
            rmax, 0.5 * cfg.L_box));

  Grid g = make_grid(cfg.n, cfg.N, cfg.L_box);
  OperatorModel L = make_free_model(g, cfg.m);
  const MultiIndex y = center_index(g);

  // The empirical constant for one band is its largest normalized tail over
  // the time sweep.  Uniformity across bands is the hard part of the claim
  // (it is what lets the band series be summed), so the stability factor
  // gates the variation of that per-band envelope across the k sweep.  The
  // tails also sink further below the bound as t grows -- the measuring
  // radius sits past the wavefront, so sharper high-t packets leak less
  // mass -- which is margin, not drift, and is reported but not gated.
  std::map<int, double> per_k_sup;
  std::map<double, double> per_t_sup;
  bool all_good = true;
  std::vector<std::pair<double, double>> pts;
  for (double t : ts) {
    const int k0 = time_scale_index(t);
    for (int koff : ks) {
      const int k = k0 + koff;
      const SymbolFn sym = product(propagator_symbol(t, 0.0),
                                   multiplier_piece_low(k, k0, cfg.m, cfg.n));
      KernelColumn K = kernel_column(L, sym, y);
      const double radius =
          cfg.c1 * std::sqrt(1.0 + std::abs(t)) * std::ldexp(1.0, k);
      const double tail = annulus_tail_integral(K, radius);
      const double b = std::pow(1.0 + std::abs(t), 0.5 * cfg.n);
      const double measured = tail / b;
      if (!std::isfinite(measured) || measured <= 0.0) all_good = false;
      per_k_sup[koff] = std::max(per_k_sup[koff], measured);
      per_t_sup[t] = std::max(per_t_sup[t], measured);
      rep.rows.push_back({fmt("t=%.17g;k=%d", t, k), measured, 1.0, measured});
      pts.push_back({radius, measured});
    }
  }
  std::vector<double> envelopes;
  for (auto& [koff, v] : per_k_sup) {
    rep.summary[fmt("sup_k%d", koff)] = v;
    envelopes.push_back(v);
  }
  for (auto& [t, v] : per_t_sup) rep.summary[fmt("sup_t%g", t)] = v;
  const double spread = spread_ratio(envelopes);
  rep.summary["sup"] = *std::max_element(envelopes.begin(), envelopes.end());
  rep.summary["spread"] = spread;
  set_verdict(rep, all_good && spread < cfg.stability,
              fmt("per-band sup of normalized tail spread %.3g (stability "
                  "factor %g)%s",
                  spread, cfg.stability,
                  all_good ? "" : "; a tail value was nonpositive"));
  rep.plot.title = "normalized off-diagonal mass of the compact piece";
  rep.plot.xlabel = "annulus radius";
  rep.plot.ylabel = "tail / (1+t)^{n/2}";
  rep.plot.points = pts;
  return rep;
}

ExperimentReport run_feynman_kac(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "feynman_kac";
  const std::size_t N1 = std::min<std::size_t>(cfg.N, 256);
  const std::size_t N2 = std::min<std::size_t>(cfg.N, 32);
  Grid g1 = make_grid(1, N1, static_cast<double>(N1));  // h = 1
  Grid g2 = make_grid(2, N2, static_cast<double>(N2));

  struct Case {
    std::string name;
    Grid g;
    OperatorModel model;
  };
  std::vector<Case> cases;
  for (int i = 0; i < 3; ++i) {
    const std::string spec =
        fmt("randnonneg:seed=%llu",
            static_cast<unsigned long long>(cfg.seed + i));
    cases.push_back(
        {fmt("line_v%d", i), g1, make_potential_model(g1, make_potential(g1, spec))});
  }
  for (int i = 3; i < 5; ++i) {
    const std::string spec =
        fmt("randnonneg:seed=%llu",
            static_cast<unsigned long long>(cfg.seed + i));
    cases.push_back(
        {fmt("plane_v%d", i), g2, make_potential_model(g2, make_potential(g2, spec))});
  }
  cases.push_back(
      {"plane_lshape", g2, make_dirichlet_model(g2, make_mask(g2, "lshape"))});

  bool ok = true;
  std::string why;
  double worst = 0.0;
  for (const Case& c : cases) {
    const Grid& g = c.g;
    const std::size_t N = g.points_per_axis();
    const auto& dom = c.model.domain();
    std::vector<MultiIndex> coords(dom.size());
    for (std::size_t r = 0; r < dom.size(); ++r)
      coords[r] = unflatten(g, dom[r]);
    for (double t : {0.1, 0.5}) {
      Eigen::MatrixXd H = dense_real_calculus(c.model, heat_symbol(t));
      const std::vector<double> prof = stencil_heat_profile(g, t);
      double viol = 0.0;
      for (std::size_t r = 0; r < dom.size(); ++r) {
        for (std::size_t cc = 0; cc < dom.size(); ++cc) {
          const double hv = H(static_cast<Eigen::Index>(r),
                              static_cast<Eigen::Index>(cc));
          viol = std::max(viol, -hv);  // positivity
          double free_h = 1.0;
          for (int a = 0; a < g.dim(); ++a) {
            const std::int64_t d =
                (coords[r][a] - coords[cc][a] + static_cast<std::int64_t>(N)) %
                static_cast<std::int64_t>(N);
            free_h *= prof[static_cast<std::size_t>(d)];
          }
          viol = std::max(viol, hv - free_h);  // domination by the free flow
        }
      }
      worst = std::max(worst, viol);
      rep.rows.push_back(
          {fmt("case=%s;t=%g", c.name.c_str(), t), viol, 1e-10, viol / 1e-10});
      if (viol > 1e-10 && ok) {
        ok = false;
        why = fmt("case=%s t=%g violates positivity/domination by %.3g",
                  c.name.c_str(), t, viol);
      }
    }
  }
  rep.summary["max_violation"] = worst;
  set_verdict(rep, ok, why);
  return rep;
}

namespace {

ExperimentReport kernel_resolvent_decay(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "resolvent_decay";
  Grid g = make_grid(cfg.n, cfg.N, cfg.L_box);
  OperatorModel L = make_free_model(g, cfg.m);
  const MultiIndex y = center_index(g);
  const double im = 1.0 / cfg.m;

  bool ok = true;
  std::string why;
  std::vector<double> l1s, l2s;
  for (double t : {0.25, 1.0}) {
    KernelColumn K = kernel_column(L, heat_symbol(t), y);
    const double l1 = lp_norm(K.column, 1.0);
    const double l2sq = std::pow(lp_norm(K.column, 2.0), 2.0);
    const double vol = ball_volume(g, K.source, std::pow(t, im));
    l1s.push_back(l1);
    l2s.push_back(l2sq * vol);
    rep.rows.push_back({fmt("t=%g;check=l1_mass", t), l1, 1.0, l1});
    rep.rows.push_back(
        {fmt("t=%g;check=l2_mass", t), l2sq * vol, 1.0, l2sq * vol});

    // shell averages of |K| against x = (d^m / t)^{1/(2(m-1))}
    std::vector<std::pair<double, double>> pts;
    const double root_t = std::pow(t, im);
    for (int j = 0; j <= 3; ++j) {
      const double d0 = std::ldexp(root_t, j);
      const double d1 = d0 * std::numbers::sqrt2;
      double acc = 0.0;
      std::size_t cnt = 0;
      for (std::size_t i = 0; i < K.column.size(); ++i) {
        const double d = torus_distance(g, i, K.source);
        if (d >= d0 && d < d1) {
          acc += std::abs(K.column[i]);
          ++cnt;
        }
      }
      if (cnt == 0) continue;
      const double avg = acc / static_cast<double>(cnt);
      if (avg <= 0.0) continue;
      const double x =
          std::pow(std::pow(d0, cfg.m) / t, 1.0 / (2.0 * (cfg.m - 1)));
      pts.push_back({x, std::log(avg)});
    }
    if (pts.size() < 3) {
      if (ok) {
        ok = false;
        why = fmt("t=%g: only %zu usable shells for the decay fit", t,
                  pts.size());
      }
      continue;
    }
    LineFit fit = fit_line(pts);
    rep.rows.push_back(
        {fmt("t=%g;check=decay_slope", t), fit.slope, 0.0, fit.slope});
    rep.summary[fmt("slope_t%g", t)] = fit.slope;
    rep.summary[fmt("r2_t%g", t)] = fit.r2;
    if (!(fit.slope < 0.0 && fit.r2 >= 0.9) && ok) {
      ok = false;
      why = fmt("t=%g decay fit slope %.3f r2 %.3f (need slope < 0, "
                "r2 >= 0.9)",
                t, fit.slope, fit.r2);
    }
  }
  const double s1 = spread_ratio(l1s), s2 = spread_ratio(l2s);
  rep.summary["l1_spread"] = s1;
  rep.summary["l2_spread"] = s2;
  if ((s1 >= cfg.stability || s2 >= cfg.stability) && ok) {
    ok = false;
    why = fmt("kernel mass spread l1=%.3g l2=%.3g exceeds stability %g", s1,
              s2, cfg.stability);
  }
  set_verdict(rep, ok, why);
  return rep;
}

ExperimentReport kernel_harnack_annulus(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "harnack_annulus";
  Grid g = make_grid(cfg.n, cfg.N, cfg.L_box);
  OperatorModel L = make_free_model(g, cfg.m);
  const MultiIndex y = center_index(g);
  const auto ts = sorted(cfg.t_sweep);
  const double bound = 2.0 * std::pow(5.0, cfg.n - 1);

  bool ok = true;
  std::string why;
  double worst = 0.0;
  for (double t : ts) {
    KernelColumn K = kernel_column(L, resolvent_symbol(t, 0.5 * cfg.n), y);
    for (double R = cfg.L_box / 8.0; R >= 4.0 * g.spacing(); R *= 0.5) {
      double hi = 0.0, lo = kInf;
      for (std::size_t i = 0; i < K.column.size(); ++i) {
        const double d = torus_distance(g, i, K.source);
        if (d >= R && d <= 2.0 * R) {
          const double v = std::abs(K.column[i]);
          hi = std::max(hi, v);
          lo = std::min(lo, v);
        }
      }
      const double ratio = (lo > 0.0 && std::isfinite(lo)) ? hi / lo : kInf;
      worst = std::max(worst, ratio);
      rep.rows.push_back(
          {fmt("t=%g;R=%.17g", t, R), ratio, bound, ratio / bound});
      if (ratio > bound && ok) {
        ok = false;
        why = fmt("annulus oscillation %.4f exceeds %.4f at t=%g R=%g", ratio,
                  bound, t, R);
      }
    }
  }
  rep.summary["max_ratio"] = worst;
  rep.summary["bound"] = bound;
  set_verdict(rep, ok, why);
  return rep;
}

ExperimentReport kernel_q_kernel(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "q_kernel";
  Grid g = make_grid(cfg.n, cfg.N, cfg.L_box);
  OperatorModel L = make_free_model(g, cfg.m);
  const MultiIndex y = center_index(g);
  auto [phi0, phi1] = cutoff_pair();
  (void)phi0;
  const double halfn = 0.5 * cfg.n;

  std::vector<double> vals;
  for (double c0 : {1.0, 0.25, 0.0625}) {
    for (int k : cfg.k_sweep) {
      const double T = std::ldexp(1.0, cfg.m * k);
      SymbolFn damp(
          [T, halfn](double l) {
            return cplx(std::pow(1.0 + l, -halfn) * (-std::expm1(-T * l)));
          },
          {0.0, kInf}, fmt("qdamp:T=%g", T));
      const SymbolFn sym = product(damp, scale_arg(phi1, c0));
      KernelColumn K = kernel_column(L, sym, y);
      const double l1 = lp_norm(K.column, 1.0);
      rep.rows.push_back({fmt("c0=%g;k=%d", c0, k), l1, 1.0, l1});
      vals.push_back(l1);
    }
  }
  const double spread = spread_ratio(vals);
  rep.summary["spread"] = spread;
  rep.summary["sup"] = *std::max_element(vals.begin(), vals.end());
  set_verdict(rep, spread < cfg.stability,
              fmt("L1 kernel mass spread %.3g (stability factor %g)", spread,
                  cfg.stability));
  return rep;
}

ExperimentReport kernel_complex_time(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "complex_time";
  Grid g = make_grid(cfg.n, cfg.N, cfg.L_box);
  OperatorModel L = make_free_model(g, cfg.m);
  const MultiIndex y = center_index(g);
  const double R = 4.0;
  const double a = std::pow(R, -cfg.m);

  std::vector<double> vals;
  for (double s : {0.0, 1.0, 2.0}) {
    for (double tau : {0.0, 1.0, -1.0, 4.0, -4.0, 16.0, -16.0}) {
      KernelColumn K = kernel_column(L, complex_heat_symbol(a, tau), y);
      const double vol = ball_volume(g, K.source, 1.0 / R);
      const double measured = kernel_radial_moment(K, s) * vol *
                              std::pow(R, s) *
                              std::pow(1.0 + std::abs(tau), -s);
      rep.rows.push_back(
          {fmt("s=%g;tau=%g", s, tau), measured, 1.0, measured});
      vals.push_back(measured);
    }
  }
  const double spread = spread_ratio(vals);
  rep.summary["spread"] = spread;
  set_verdict(rep, spread < cfg.stability,
              fmt("twisted-diffusion moment spread %.3g (stability factor "
                  "%g)",
                  spread, cfg.stability));
  return rep;
}

// sup over sample points of the j-th central-difference derivative
double sup_derivative(const SymbolFn& F, int j) {
  const double e = 1e-4;
  double worst = 0.0;
  for (double x = 0.2; x <= 1.05; x += 1e-3) {
    double v = 0.0;
    switch (j) {
      case 0:
        v = std::abs(F(x));
        break;
      case 1:
        v = std::abs(F(x + e) - F(x - e)) / (2.0 * e);
        break;
      case 2:
        v = std::abs(F(x + e) - 2.0 * F(x) + F(x - e)) / (e * e);
        break;
      default:
        v = std::abs(F(x + 2 * e) - 2.0 * F(x + e) + 2.0 * F(x - e) -
                     F(x - 2 * e)) /
            (2.0 * e * e * e);
        break;
    }
    worst = std::max(worst, v);
  }
  return worst;
}

ExperimentReport kernel_weighted_multiplier(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "weighted_multiplier";
  Grid g = make_grid(cfg.n, cfg.N, cfg.L_box);
  OperatorModel L = make_free_model(g, cfg.m);
  const MultiIndex y = center_index(g);
  const SymbolFn phi = dyadic_bump();

  std::vector<double> vals;
  for (double R : {2.0, 4.0, 8.0}) {
    // band symbol at scale R: phi(sqrt(lambda)/R)
    SymbolFn band(
        [phi, R](double l) { return phi(std::sqrt(l) / R); },
        {R * R / 16.0, R * R}, fmt("band:R=%g", R));
    KernelColumn K = kernel_column(L, band, y);
    const double vol = ball_volume(g, K.source, 1.0 / R);
    for (double s : {1.0, 2.0}) {
      // Hoelder size of the dilated profile, via derivative sups up to
      // ceil(s/2) + 1
      const int jmax = static_cast<int>(std::ceil(0.5 * s)) + 1;
      double hold = 0.0;
      for (int j = 0; j <= jmax; ++j)
        hold = std::max(hold, sup_derivative(phi, j));
      const double measured =
          weighted_l2_kernel(K, R, s) * vol / (hold * hold);
      rep.rows.push_back({fmt("R=%g;s=%g", R, s), measured, 1.0, measured});
      vals.push_back(measured);
    }
  }
  const double spread = spread_ratio(vals);
  rep.summary["spread"] = spread;
  set_verdict(rep, spread < cfg.stability,
              fmt("weighted kernel mass spread %.3g (stability factor %g)",
                  spread, cfg.stability));
  return rep;
}

}  // namespace

ExperimentReport run_kernel_check(const std::string& kind,
                                  const ExperimentConfig& cfg) {
  require_free(cfg, "kernel_check");
  if (kind == "resolvent_decay") return kernel_resolvent_decay(cfg);
  if (kind == "harnack_annulus") return kernel_harnack_annulus(cfg);
  if (kind == "q_kernel") return kernel_q_kernel(cfg);
  if (kind == "complex_time") return kernel_complex_time(cfg);
  if (kind == "weighted_multiplier") return kernel_weighted_multiplier(cfg);
  throw std::invalid_argument("kernel_check: unknown kind '" + kind + "'");
}

ExperimentReport run_besov_submult(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "besov_submult";
  const double s = cfg.s_sweep.empty() ? 1.3 : cfg.s_sweep.front();
  const double window = 8.0;
  const std::size_t samples = std::size_t{1} << 13;

  const SymbolFn phi = dyadic_bump();
  auto [phi0, phi1] = cutoff_pair();
  (void)phi1;
  const SymbolFn eta = plateau_window(0.125, 0.25, 1.0, 2.0);

  struct Pair {
    const char* name;
    SymbolFn F, G;
  };
  const Pair pairs[] = {
      {"phi*phi", phi, phi},
      {"phi*phi_half", phi, scale_arg(phi, 2.0)},
      {"phi*phi_double", phi, scale_arg(phi, 0.5)},
      {"phi0*phi", phi0, phi},
      {"phi0*phi0", phi0, phi0},
      {"phi0_half*phi", scale_arg(phi0, 2.0), phi},
      {"eta*phi", eta, phi},
      {"eta*phi0", eta, phi0},
      {"phi_q*phi0_half", scale_arg(phi, 4.0), scale_arg(phi0, 2.0)},
      {"eta*eta_half", eta, scale_arg(eta, 2.0)},
  };

  bool ok = true;
  std::string why;
  double worst = 0.0;
  for (const Pair& pr : pairs) {
    const double lhs = besov_norm(product(pr.F, pr.G), s, window, samples);
    const double rhs = besov_norm(pr.F, s, window, samples) *
                       besov_norm(pr.G, s, window, samples);
    const double ratio = lhs / rhs;
    worst = std::max(worst, ratio);
    rep.rows.push_back({fmt("pair=%s", pr.name), lhs, rhs, ratio});
    if (ratio > 1.0 + 1e-5 && ok) {
      ok = false;
      why = fmt("pair %s breaks submultiplicativity: ratio %.8f", pr.name,
                ratio);
    }
  }
  rep.summary["max_ratio"] = worst;
  set_verdict(rep, ok, why);
  return rep;
}

ExperimentReport run_besov_envelope(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = "besov_envelope";
  const double s = cfg.s_sweep.empty() ? 1.3 : cfg.s_sweep.front();
  if (!(s > cfg.n && s < cfg.n + 0.5))
    throw std::invalid_argument(
        fmt("besov_envelope: s = %g outside the admissible window "
            "(n, n + 1/2) = (%d, %g)",
            s, cfg.n, cfg.n + 0.5));
  const int m = cfg.m, n = cfg.n;
  const double window = 2.0;

  std::vector<double> ratios;
  for (double t : sorted(cfg.t_sweep)) {
    const int k0 = time_scale_index(t);
    for (int koff : cfg.k_sweep) {
      const int k = k0 + koff;
      const double cap_f = static_cast<double>(m) * koff / (m - 1.0);
      const int cap = static_cast<int>(std::floor(cap_f));
      std::vector<int> ls = {-m * k - 6, -2, 0, std::min(4, cap), cap};
      std::sort(ls.begin(), ls.end());
      ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
      for (int l : ls) {
        if (l > cap_f) continue;
        const SymbolFn G = modulated_band_symbol(l, k, k0, m, n, t);
        const double omega = std::abs(t) * std::ldexp(1.0, l);
        const std::size_t samples = std::min<std::size_t>(
            std::size_t{1} << 17,
            std::max<std::size_t>(
                1024, next_pow2(window * omega * 8.0 / std::numbers::pi)));
        const double measured = besov_norm(G, 0.5 * s, window, samples);
        const double bound = besov_growth_envelope(l, k, m, n, s, t);
        rep.rows.push_back({fmt("t=%.17g;k=%d;l=%d", t, k, l), measured,
                            bound, measured / bound});
        ratios.push_back(measured / bound);
      }
    }
  }
  const double spread = spread_ratio(ratios);
  rep.summary["spread"] = spread;
  rep.summary["ratio_min"] = *std::min_element(ratios.begin(), ratios.end());
  rep.summary["ratio_max"] = *std::max_element(ratios.begin(), ratios.end());
  set_verdict(rep, spread < cfg.stability,
              fmt("envelope ratio spread %.3g (stability factor %g)", spread,
                  cfg.stability));
  return rep;
}

std::vector<ExperimentReport> run_selfcheck(const ExperimentConfig& base) {
  std::vector<ExperimentReport> out;
  auto mini = [&base]() {
    ExperimentConfig c;
    c.seed = base.seed;
    c.stability = base.stability;
    c.c1 = base.c1;
    return c;
  };

  {
    // the t^{n/2} regime needs t well past the probe's near-field crossover,
    // and the box must still hold the wavefront: L = 320 at N = 256 is the
    // largest window that keeps both.
    ExperimentConfig c = mini();
    c.N = 256;
    c.L_box = 320.0;
    c.t_sweep = {16, 22, 30, 36};
    out.push_back(run_sharpness(c));
  }
  {
    ExperimentConfig c = mini();
    c.N = 256;
    c.L_box = 64.0;
    c.t_sweep = {2, 4, 8};
    c.probes = 8;
    out.push_back(run_weak11_upper(c));
  }
  {
    ExperimentConfig c = mini();
    c.N = 256;
    c.L_box = 64.0;
    c.t_sweep = {0, 1, 2, 4, 8, 16};
    c.probes = 4;
    out.push_back(run_lp_bound(c));
  }
  out.push_back(run_calculus_oracle(mini()));
  out.push_back(run_partition_check(mini()));
  {
    ExperimentConfig c = mini();
    c.N = 256;
    out.push_back(run_cz_check(c));
  }
  {
    ExperimentConfig c = mini();
    c.N = 128;
    c.probes = 4;
    out.push_back(run_cz_heat_l2(c));
  }
  {
    ExperimentConfig c = mini();
    c.N = 256;
    c.L_box = 128.0;
    c.t_sweep = {1, 4};
    c.k_sweep = {1, 2};
    out.push_back(run_tail_integral(c));
  }
  {
    ExperimentConfig c = mini();
    c.N = 256;
    c.L_box = 1.0;
    c.t_sweep = {0.25, 1};
    out.push_back(run_kernel_check("harnack_annulus", c));
  }
  {
    ExperimentConfig c = mini();
    c.N = 256;
    c.L_box = 16.0;
    c.t_sweep = {0.25, 1};
    c.k_sweep = {1, 2};
    out.push_back(run_kernel_check("resolvent_decay", c));
    out.push_back(run_kernel_check("q_kernel", c));
    out.push_back(run_kernel_check("complex_time", c));
    out.push_back(run_kernel_check("weighted_multiplier", c));
  }
  {
    ExperimentConfig c = mini();
    c.N = 8;
    out.push_back(run_feynman_kac(c));
  }
  out.push_back(run_besov_submult(mini()));
  {
    ExperimentConfig c = mini();
    c.t_sweep = {0, 1, 8};
    c.k_sweep = {1, 2};
    out.push_back(run_besov_envelope(c));
  }
  return out;
}

}  // namespace schrolab
