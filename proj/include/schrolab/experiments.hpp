#pragma once
#include <map>
#include <string>
#include <vector>

#include "schrolab/config.hpp"
#include "schrolab/field.hpp"
#include "schrolab/operators.hpp"
#include "schrolab/svg.hpp"

namespace schrolab {

// One sweep point: the parameter tuple (stable text form), the measured
// quantity, the bound it is compared against, and measured/bound.
struct ExperimentRow {
  std::string params;
  double measured = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct ExperimentReport {
  std::string kind;
  std::vector<ExperimentRow> rows;
  std::map<std::string, double> summary;  // fitted slopes, spreads, ...
  bool pass = false;
  std::string detail;  // one-line verdict; names the first failing row
  PlotSeries plot;     // empty points => no figure for this experiment
};

// CSV body for a report: header "params,measured,bound,ratio", %.17g.
inline constexpr const char* experiment_csv_header =
    "params,measured,bound,ratio";
std::string report_csv(const ExperimentReport& rep);

// Shared probe family.  The bandlimited probe is the inverse spectral
// transform of phi1(|xi|)/(1+|xi|^2), normalized to unit l1 mass; it is
// the worst case driving the lower bounds.  Returns the zero field when
// the grid resolves no frequencies above the cutoff.
Field bandlimited_probe(const Grid& g);
// unit-mass delta (value h^{-n}) at a flat index
Field delta_probe(const Grid& g, std::size_t flat);
// 16 random cells with gaussian amplitudes, normalized to unit l1 mass
Field sparse_probe(const Grid& g, std::uint64_t seed);

// Growth of the weak-L1 size of e^{itL}(I+L)^{-n/2} f for the bandlimited
// probe: fits log W(t) against log t, expects slope near n/2, and checks
// the pointwise lower envelope c t |x|^{-n/2-1} on the annulus
// {2t <= |x| < 3t} at the middle sweep time.  Needs L_box >= 4 (1 + max t).
ExperimentReport run_sharpness(const ExperimentConfig& cfg);

// Upper counterpart: sup over the probe family of the weak-L1 size, fitted
// against 1 + t; the fitted exponent must stay below n/2 + 0.12 and agree
// with the bandlimited-probe lower fit within 0.25.
ExperimentReport run_weak11_upper(const ExperimentConfig& cfg);

// ||e^{itL}(I+L)^{-s} f||_p / ||f||_p with s = n|1/2 - 1/p|.  p = 2 rows
// must sit within 1e-10 of 1 (unitarity in disguise); p != 2 rows are
// fitted against 1 + t and the exponent compared with s.
ExperimentReport run_lp_bound(const ExperimentConfig& cfg);

// Same operator, two calculi: the dense eigensolver route against the FFT
// route along the stencil eigenvalue curve 4 h^{-2} sin^2(pi k / N), for
// five symbols and five random fields on two grids.  Agreement to 1e-9.
ExperimentReport run_calculus_oracle(const ExperimentConfig& cfg);

// max | sum_l phi(2^{-l} lambda) - 1 | over a log grid of 1e4 lambdas.
ExperimentReport run_partition_check(const ExperimentConfig& cfg);

// Dyadic decomposition invariants over a batch of seeded fields and
// heights: constants, disjointness, reconstruction, via cz_verify.
ExperimentReport run_cz_check(const ExperimentConfig& cfg);

// Smoothed bad parts: C = ||sum_{k>k0} e^{-2^{mk} L} b_k||_2 /
// (height^{1/2} ||f||_1^{1/2}) must be stable (max/min < 3) across
// structured multi-scale inputs on two grid sizes.
ExperimentReport run_cz_heat_l2(const ExperimentConfig& cfg);

// Off-diagonal mass of the compact multiplier piece: the integral of
// |K(x,y)| over d(x,y) > c1 sqrt(1+|t|) 2^k, divided by (1+|t|)^{n/2},
// must be uniformly small over the (k, t) sweep.  Needs a box large
// enough to hold the largest radius.
ExperimentReport run_tail_integral(const ExperimentConfig& cfg);

// Positivity and domination by the free flow: for matrix models with
// V >= 0 (and Dirichlet subdomains), entrywise
// 0 <= exp(-t(Delta+V))(x,y) <= exp(-t Delta)(x,y) up to 1e-10.
ExperimentReport run_feynman_kac(const ExperimentConfig& cfg);

// Kernel-level estimates; kind selects the check:
//   resolvent_decay    log-linear decay of heat kernel columns in
//                      (d^m/t)^{1/(2(m-1))}, plus L1/L2 mass rows
//   harnack_annulus    max/min of (I+tL)^{-n/2} columns on annuli
//                      {R <= d <= 2R} bounded by 2 * 5^{n-1}
//   q_kernel           L1 mass of (I+L)^{-n/2}(I-e^{-2^{mk}L}) phi1(c0 L)
//   complex_time       radial moments of e^{-a(1+i tau)L} columns against
//                      (1+|tau|)^s / (R^s V(y,1/R)), a = R^{-m}
//   weighted_multiplier weighted L2 kernel mass of a band symbol at scale
//                      R against its Hoelder size
ExperimentReport run_kernel_check(const std::string& kind,
                                  const ExperimentConfig& cfg);

// ||FG|| <= ||F|| ||G|| for the smoothness norm, on a fixed battery of
// ten symbol pairs.
ExperimentReport run_besov_submult(const ExperimentConfig& cfg);

// Smoothness norm of the modulated band pieces against the predicted
// envelope min{1,2^{l+mk}} min{1,2^{-ln/2}} max{1,(2^l(1+|t|))^{s/2}};
// requires n < s < n + 1/2.  The ratio spread must stay under the
// configured stability factor.
ExperimentReport run_besov_envelope(const ExperimentConfig& cfg);

// Reduced-size pass over every experiment kind (sweeps capped at N = 256,
// dense models at N = 32); inherits seed/stability/c1 from `base`.
std::vector<ExperimentReport> run_selfcheck(const ExperimentConfig& base);

}  // namespace schrolab
