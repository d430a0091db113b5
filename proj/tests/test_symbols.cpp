#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "schrolab/symbols.hpp"

using namespace schrolab;

TEST_CASE("smooth step plateaus and midpoint") {
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(0.5) == 0.5);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(2.0) == 1.0);
  double prev = 0.0;
  for (double x = -0.2; x <= 1.2; x += 0.01) {
    const double v = smooth_step(x);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("dyadic bump support and plateau") {
  SymbolFn phi = dyadic_bump();
  CHECK(phi(0.2) == cplx(0.0));
  CHECK(phi(1.1) == cplx(0.0));
  CHECK(phi(0.5) == cplx(1.0));
  CHECK(phi.support().lo == 0.25);
  CHECK(phi.support().hi == 1.0);
}

TEST_CASE("dyadic sum telescopes to one") {
  SymbolFn phi = dyadic_bump();
  {
    double s = 0.0;
    for (int l = -30; l <= 30; ++l) s += phi(std::exp2(-l) * 0.5).real();
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
  // deterministic log-uniform sample of [1e-6, 1e6]
  const int M = 10000;
  double worst = 0.0;
  for (int i = 0; i < M; ++i) {
    const double lam = 1e-6 * std::pow(1e12, (i + 0.5) / M);
    double s = 0.0;
    for (int l = -60; l <= 60; ++l) s += phi(std::exp2(-l) * lam).real();
    worst = std::max(worst, std::abs(s - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("cutoff pair complements") {
  auto [phi0, phi1] = cutoff_pair();
  CHECK(phi1(1.5) == cplx(1.0));
  CHECK(phi0(0.3) == cplx(1.0));
  CHECK(phi0(1.2) == cplx(0.0));
  CHECK(phi1(0.4) == cplx(0.0));
  for (double lam = 0.0; lam <= 10.0; lam += 0.05)
    CHECK(phi0(lam).real() + phi1(lam).real() ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("propagator symbol values") {
  CHECK(propagator_symbol(0.0, 0.0)(3.7) == cplx(1.0));
  CHECK(propagator_symbol(2.5, 1.5)(0.0) == cplx(1.0));
  const cplx v = propagator_symbol(1.0, 1.0)(1.0);
  CHECK(std::abs(v) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::arg(v) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(propagator_symbol(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("multiplier pieces reconstruct and vanish correctly") {
  const int k = 4, k0 = 1, m = 2, n = 1;
  SymbolFn lo = multiplier_piece_low(k, k0, m, n);
  SymbolFn hi = multiplier_piece_high(k, k0, m, n);
  CHECK(lo(0.0) == cplx(0.0));
  CHECK(hi(0.0) == cplx(0.0));

  const double T = std::exp2(m * k);
  for (double lam : {1e-4, 0.3, 1.0, 7.0, 40.0, 300.0}) {
    const double whole = std::pow(1.0 + lam, -0.5 * n) * (-std::expm1(-T * lam));
    CHECK(std::abs(lo(lam).real() + hi(lam).real() - whole) <= 1e-14);
  }
  // low piece dies beyond the cutoff threshold 2^{m(k-k0)/(m-1)}
  const double theta = std::exp2(static_cast<double>(m) * (k - k0) / (m - 1));
  CHECK(lo(2.0 * theta) == cplx(0.0));
  CHECK(lo(theta * 0.4).real() > 0.0);

  CHECK_THROWS_AS(multiplier_piece_low(1, 1, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(multiplier_piece_high(0, 1, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(multiplier_piece_low(2, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("time scale index brackets sqrt(1+|t|)") {
  CHECK(time_scale_index(0.0) == 0);
  CHECK(time_scale_index(3.0) == 1);
  CHECK(time_scale_index(100.0) == 3);
  CHECK(time_scale_index(-100.0) == 3);
  for (double t : {0.0, 0.7, 3.0, 15.0, 100.0, 1024.0}) {
    const int k0 = time_scale_index(t);
    const double r = std::sqrt(1.0 + t);
    CHECK(std::exp2(k0) <= r);
    CHECK(r < std::exp2(k0 + 1));
  }
}

TEST_CASE("besov norm basics") {
  SymbolFn zero;
  CHECK(besov_norm(zero, 1.0, 64.0, 1 << 10) == 0.0);

  SymbolFn phi = dyadic_bump();
  const double b0 = besov_norm(phi, 0.5);
  const double b1 = besov_norm(phi, 1.0);
  const double b2 = besov_norm(phi, 1.5);
  CHECK(b0 > 0.0);
  CHECK(b0 <= b1);
  CHECK(b1 <= b2);

  CHECK_THROWS_AS(besov_norm(heat_symbol(1.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(besov_norm(phi, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(besov_norm(phi, 1.0, 64.0, 1000), std::invalid_argument);
  CHECK_THROWS_AS(besov_norm(phi, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("besov submultiplicativity on the spec example pair") {
  SymbolFn F = dyadic_bump();
  SymbolFn G = scale_arg(cutoff_pair().first, 2.0);  // phi0(2 lambda)
  const double s = 1.5;
  const double lhs = besov_norm(product(F, G), s);
  const double rhs = besov_norm(F, s) * besov_norm(G, s);
  CHECK(lhs <= rhs * (1.0 + 1e-6));
}

TEST_CASE("besov quadrature is converged at the defaults") {
  SymbolFn F = dyadic_bump();
  const double base = besov_norm(F, 1.5, 64.0, 1 << 14);
  const double fine = besov_norm(F, 1.5, 128.0, 1 << 15);
  CHECK(std::abs(fine - base) <= 1e-6 * base);
}

TEST_CASE("growth envelope corner values") {
  // l = -mk, t = 0: every factor is 1
  CHECK(besov_growth_envelope(-8, 4, 2, 1, 1.3, 0.0) == 1.0);
  // far below: the first factor collapses
  CHECK(besov_growth_envelope(-200, 3, 2, 1, 1.3, 0.0) < 1e-50);
  // hand-computed row: l=2, k=3, m=2, n=1, s=1.3, t=1
  const double f1 = std::min(1.0, std::pow(2.0, 2 + 2 * 3));
  const double f2 = std::min(1.0, std::pow(2.0, -0.5 * 2));
  const double f3 = std::max(1.0, std::pow(4.0 * 2.0, 1.3 / 2.0));
  CHECK(besov_growth_envelope(2, 3, 2, 1, 1.3, 1.0) ==
        doctest::Approx(f1 * f2 * f3).epsilon(1e-14));
  CHECK_THROWS_AS(besov_growth_envelope(0, 1, 1, 1, 1.3, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(besov_growth_envelope(0, 1, 2, 2, 1.3, 0.0),
                  std::invalid_argument);
}

TEST_CASE("modulated band symbol matches its factor product") {
  const int l = 2, k = 3, k0 = 0, m = 2, n = 1;
  const double t = 8.0;
  SymbolFn G = modulated_band_symbol(l, k, k0, m, n, t);
  CHECK(G.support().lo == 0.25);
  CHECK(G.support().hi == 1.0);
  CHECK(G(0.2) == cplx(0.0));
  CHECK(G(1.01) == cplx(0.0));

  auto [phi0, phi1] = cutoff_pair();
  SymbolFn phi = dyadic_bump();
  const double u = 0.5;
  const double c = 2.0 * (k - k0);  // m(k-k0)/(m-1) for m=2
  const cplx expected = phi(u) * std::polar(1.0, t * std::exp2(l) * u) *
                        std::pow(1.0 + std::exp2(l) * u, -0.5) *
                        (-std::expm1(-std::exp2(m * k + l) * u)) *
                        phi0(std::exp2(l - c) * u) * std::exp(u);
  CHECK(std::abs(G(u) - expected) < 1e-14);

  CHECK_THROWS_AS(modulated_band_symbol(7, 3, 0, 2, 1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("symbols vanish outside their declared support") {
  std::vector<SymbolFn> symbols = {
      dyadic_bump(),
      cutoff_pair().first,
      cutoff_pair().second,
      plateau_window(0.125, 0.25, 1.0, 2.0),
      multiplier_piece_low(3, 0, 2, 1),
      modulated_band_symbol(1, 3, 0, 2, 1, 2.0),
  };
  for (const SymbolFn& F : symbols) {
    const SymbolSupport& s = F.support();
    for (int i = 0; i < 100; ++i) {
      const double below = s.lo * (i + 1) / 102.0;
      if (s.lo > 0.0) CHECK(F(below) == cplx(0.0));
      if (s.bounded()) CHECK(F(s.hi * (1.01 + i * 0.1)) == cplx(0.0));
    }
  }
}

TEST_CASE("symbol label parsing") {
  SymbolFn f = parse_symbol("Fk:m=2,k=5,k0=1,n=1");
  SymbolFn direct = multiplier_piece_low(5, 1, 2, 1);
  CHECK(f.label() == direct.label());
  for (double lam : {0.1, 1.0, 10.0, 100.0})
    CHECK(f(lam) == direct(lam));

  CHECK(parse_symbol("identity")(3.0) == cplx(1.0));
  CHECK(std::abs(parse_symbol("heat:t=0.5")(2.0).real() - std::exp(-1.0)) <
        1e-15);
  CHECK(parse_symbol("bump")(0.5) == cplx(1.0));
  // bump:l=2 is phi(lambda/4), peaking at 2
  CHECK(parse_symbol("bump:l=2")(2.0) == cplx(1.0));
  CHECK(parse_symbol("phi0:c=0.5")(1.0) == cplx(1.0));
  CHECK(std::abs(parse_symbol("schrodinger:t=1,s=1")(1.0)) ==
        doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(parse_symbol("wavelet"), std::invalid_argument);
  CHECK_THROWS_AS(parse_symbol("heat:q=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_symbol("heat"), std::invalid_argument);
  CHECK_THROWS_AS(parse_symbol("heat:t=abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_symbol("Fk:m=2,k=5,k0=1,n=1.5"), std::invalid_argument);
}
