#pragma once
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>

namespace schrolab {

using cplx = std::complex<double>;

struct SymbolSupport {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool bounded() const { return std::isfinite(hi); }
};

// Scalar spectral function lambda >= 0 -> complex, with a declared support
// interval.  Evaluation returns exactly 0 outside the support.  Values are
// immutable and cheap to copy; eval must be reentrant.
class SymbolFn {
 public:
  SymbolFn() : SymbolFn([](double) { return cplx(0.0); }, {0.0, 0.0}, "zero") {}
  SymbolFn(std::function<cplx(double)> eval, SymbolSupport support,
           std::string label)
      : eval_(std::move(eval)), support_(support), label_(std::move(label)) {}

  cplx operator()(double lam) const {
    if (lam < support_.lo || lam > support_.hi) return cplx(0.0);
    return eval_(lam);
  }
  const SymbolSupport& support() const { return support_; }
  const std::string& label() const { return label_; }

 private:
  std::function<cplx(double)> eval_;
  SymbolSupport support_;
  std::string label_;
};

// C-infinity ramp: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smooth_step(double x);

// phi(lambda) = chi(lambda) - chi(lambda/2) with chi = smooth_step(4l-1);
// supported in (1/4, 1), and sum_l phi(2^{-l} lambda) = 1 for lambda > 0.
SymbolFn dyadic_bump();

// (phi0, phi1): phi1 = smooth_step(2l-1) vanishing below 1/2 and equal to
// 1 from 1 on; phi0 = 1 - phi1.
std::pair<SymbolFn, SymbolFn> cutoff_pair();

// smooth plateau: 0 below a, 1 on [b,c], 0 above d
SymbolFn plateau_window(double a, double b, double c, double d);

SymbolFn constant_symbol(cplx c);
// e^{i t lambda} (1 + lambda)^{-s}, the smoothed propagator; s >= 0
SymbolFn propagator_symbol(double t, double s);
// e^{-t lambda}, t >= 0
SymbolFn heat_symbol(double t);
// (1 + t lambda)^{-s}, t >= 0, s >= 0
SymbolFn resolvent_symbol(double t, double s);
// e^{-a(1+i tau) lambda}, a > 0: heat flow continued to complex time
SymbolFn complex_heat_symbol(double a, double tau);

// lambda -> F(c * lambda), c > 0
SymbolFn scale_arg(const SymbolFn& F, double c);
SymbolFn product(const SymbolFn& F, const SymbolFn& G);

// Low/high split of the damped multiplier
//   (1+lambda)^{-n/2} (1 - e^{-2^{mk} lambda})
// by the cutoff pair evaluated at lambda / 2^{m(k-k0)/(m-1)}.  The low
// piece is compactly supported; low + high reconstruct the multiplier.
// Requires k > k0, m >= 2, n >= 1.  Labels follow the config grammar
// ("Fk:..."/"Gk:...").
SymbolFn multiplier_piece_low(int k, int k0, int m, int n);
SymbolFn multiplier_piece_high(int k, int k0, int m, int n);

// The dyadic index k0 with 2^{k0} <= sqrt(1+|t|) < 2^{k0+1}.
int time_scale_index(double t);

// Dilated band piece of the low multiplier, modulated back to unit scale:
//   phi(l) e^{i t 2^l l} (1+2^l l)^{-n/2} (1-e^{-2^{mk+l} l})
//     phi0(2^{l-m(k-k0)/(m-1)} l) e^l,
// compactly supported in [1/4, 1].  Requires k > k0 and
// l <= m(k-k0)/(m-1).
SymbolFn modulated_band_symbol(int l, int k, int k0, int m, int n, double t);

// integral of |F^(tau)| (1+|tau|)^s dtau with the unitary Fourier
// convention, computed by sampling F on [0, window) at `samples` points
// (a power of two) and transforming.  Rejects unbounded support, support
// beyond the window, and s < 0.
double besov_norm(const SymbolFn& F, double s, double window = 64.0,
                  std::size_t samples = std::size_t{1} << 14);

// min{1, 2^{l+mk}} min{1, 2^{-l n/2}} max{1, (2^l (1+|t|))^{s/2}};
// requires m >= 2 and s > n.
double besov_growth_envelope(int l, int k, int m, int n, double s, double t);

// Grammar: name[:key=val{,key=val}].  Known names: identity, heat,
// schrodinger, resolvent, bump, phi0, phi1, Fk, Gk.
SymbolFn parse_symbol(const std::string& label);

}  // namespace schrolab
