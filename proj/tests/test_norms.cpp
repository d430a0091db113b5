#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "schrolab/norms.hpp"
#include "test_util.hpp"

using namespace schrolab;
using schrolab::test::random_field;

namespace {

std::vector<std::string> split_csv(const std::string& row) {
  std::vector<std::string> out;
  std::stringstream ss(row);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Field staircase_field() {
  Grid g = make_grid(1, 8, 8.0);  // h = 1
  Field f(g);
  f[0] = 4.0;
  f[1] = 2.0;
  f[2] = 1.0;
  return f;
}

}  // namespace

TEST_CASE("lp norms of the staircase field") {
  Field f = staircase_field();
  CHECK(lp_norm(f, 1.0) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(21.0)).epsilon(1e-14));
  CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == 4.0);
  CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("weak quasinorm of the staircase field") {
  Field f = staircase_field();
  DistributionReport r1 = weak_lp_quasinorm(f, 1.0);
  // max of 4*1, 2*2, 1*3
  CHECK(r1.weak_quasinorm == doctest::Approx(4.0).epsilon(1e-14));
  REQUIRE(r1.thresholds.size() == 3);
  CHECK(r1.thresholds[0] == 1.0);
  CHECK(r1.thresholds[1] == 2.0);
  CHECK(r1.thresholds[2] == 4.0);
  CHECK(r1.measures[0] == 2.0);  // mu{|f| > 1}
  CHECK(r1.measures[1] == 1.0);
  CHECK(r1.measures[2] == 0.0);

  DistributionReport r2 = weak_lp_quasinorm(f, 2.0);
  CHECK(r2.weak_quasinorm == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(weak_lp_quasinorm(f, 0.0), std::invalid_argument);
}

TEST_CASE("weak quasinorm agrees with the threshold-scan oracle") {
  Grid g = make_grid(1, 64, 16.0);
  for (int seed : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}) {
    Field f = random_field(g, seed);
    for (double p : {1.0, 2.0}) {
      const double fast = weak_lp_quasinorm(f, p).weak_quasinorm;
      const double slow = ref::weak_lp_quasinorm(f, p);
      CHECK(fast == doctest::Approx(slow).epsilon(1e-13));
    }
  }
}

TEST_CASE("chebyshev, scaling and quasi-triangle inequalities") {
  Grid g = make_grid(2, 16, 4.0);
  for (int seed : {30, 31, 32}) {
    Field f = random_field(g, seed);
    Field h = random_field(g, seed + 100);
    const double wf = weak_lp_quasinorm(f, 1.0).weak_quasinorm;
    const double wh = weak_lp_quasinorm(h, 1.0).weak_quasinorm;
    CHECK(wf <= lp_norm(f, 1.0) * (1.0 + 1e-14));

    Field scaled = f;
    scaled *= cplx(-2.5, 0.0);
    CHECK(weak_lp_quasinorm(scaled, 1.0).weak_quasinorm ==
          doctest::Approx(2.5 * wf).epsilon(1e-13));

    const double wsum = weak_lp_quasinorm(f + h, 1.0).weak_quasinorm;
    CHECK(wsum <= 2.0 * (wf + wh) * (1.0 + 1e-14));
  }
}

TEST_CASE("annulus tail integral on hand-checked columns") {
  Grid g = make_grid(1, 16, 16.0);  // h = 1
  Field ones(g);
  for (std::size_t i = 0; i < 16; ++i) ones[i] = 1.0;
  KernelColumn K{3, ones};

  CHECK(annulus_tail_integral(K, 0.0) == doctest::Approx(15.0));
  // distances from 3 on the 16-circle: 9 points within d <= 4
  CHECK(annulus_tail_integral(K, 4.0) == doctest::Approx(7.0));
  CHECK(annulus_tail_integral(K, 8.0) == 0.0);
  CHECK(annulus_tail_integral(K, 100.0) == 0.0);
  CHECK_THROWS_AS(annulus_tail_integral(K, -1.0), std::invalid_argument);

  // generic column: radius 0 drops exactly the source cell
  Grid g2 = make_grid(1, 256, 32.0);
  Field rf = random_field(g2, 77);
  KernelColumn K2{40, rf};
  const double cell = g2.spacing();
  CHECK(annulus_tail_integral(K2, 0.0) ==
        doctest::Approx(lp_norm(rf, 1.0) - std::abs(rf[40]) * cell)
            .epsilon(1e-12));
  double prev = annulus_tail_integral(K2, 0.0);
  for (double r : {1.0, 2.0, 4.0, 8.0, 15.0}) {
    const double cur = annulus_tail_integral(K2, r);
    CHECK(cur <= prev * (1.0 + 1e-14));
    prev = cur;
  }
}

TEST_CASE("weighted kernel integrals on hand-checked columns") {
  Grid g = make_grid(1, 8, 8.0);  // h = 1, distances from 0: 0 1 2 3 4 3 2 1
  Field ones(g);
  for (std::size_t i = 0; i < 8; ++i) ones[i] = 1.0;
  KernelColumn K{0, ones};

  CHECK(weighted_l2_kernel(K, 1.0, 0.0) == doctest::Approx(8.0));
  CHECK(weighted_l2_kernel(K, 1.0, 2.0) == doctest::Approx(84.0));
  CHECK(kernel_radial_moment(K, 0.0) == doctest::Approx(8.0));
  CHECK(kernel_radial_moment(K, 2.0) == doctest::Approx(44.0));

  CHECK_THROWS_AS(weighted_l2_kernel(K, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(weighted_l2_kernel(K, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_radial_moment(K, -2.0), std::invalid_argument);

  Field delta(g);
  delta[0] = 5.0;
  KernelColumn D{0, delta};
  CHECK(weighted_l2_kernel(D, 3.0, 2.0) == doctest::Approx(25.0));
}

TEST_CASE("power law fit recovers exact laws") {
  std::vector<std::pair<double, double>> sq;
  for (int x = 1; x <= 8; ++x) sq.emplace_back(x, 3.0 * x * x);
  FitReport f = fit_power_law(sq);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r_squared >= 1.0 - 1e-12);
  CHECK(f.npoints == 8);
  CHECK(f.x_min == 1.0);
  CHECK(f.x_max == 8.0);

  std::vector<std::pair<double, double>> flat = {{1, 5}, {2, 5}, {4, 5}, {9, 5}};
  FitReport c = fit_power_law(flat);
  CHECK(std::abs(c.slope) < 1e-12);
  CHECK(c.r_squared == 1.0);
}

TEST_CASE("power law fit under mild noise") {
  Rng rng(99);
  std::vector<std::pair<double, double>> pts;
  for (int i = 1; i <= 40; ++i) {
    const double x = 0.5 * i;
    pts.emplace_back(x, 2.0 * std::sqrt(x) * (1.0 + 0.01 * rng.gaussian()));
  }
  FitReport f = fit_power_law(pts);
  CHECK(f.slope > 0.45);
  CHECK(f.slope < 0.55);
  CHECK(f.r_squared > 0.99);
}

TEST_CASE("power law fit rejections and noise floor") {
  CHECK_THROWS_AS(fit_power_law({{1, 1}, {2, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law({{1, 1}, {2, -2}, {3, 3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law({{0, 1}, {2, 2}, {3, 3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law({{2, 1}, {2, 2}, {2, 3}}),
                  std::invalid_argument);

  std::vector<std::pair<double, double>> pts = {
      {1, 1.0}, {2, 2.0}, {3, 3.0}, {4, 4.0}, {5, 5.0},
      {6, 1e-300}, {7, 1e-300}};
  FitReport f = fit_power_law(pts);
  CHECK(f.npoints == 5);  // noise-floor points dropped
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<std::pair<double, double>> starved = {
      {1, 1.0}, {2, 1e-300}, {3, 1e-300}};
  CHECK_THROWS_AS(fit_power_law(starved), std::invalid_argument);
}

TEST_CASE("csv row schemas are stable") {
  Field f = staircase_field();
  DistributionReport rep = weak_lp_quasinorm(f, 1.0);
  const std::string row = distribution_csv_row("demo", f, rep);
  auto cells = split_csv(row);
  REQUIRE(cells.size() == 6);
  CHECK(cells[0] == "demo");
  CHECK(std::stod(cells[1]) == 1.0);
  CHECK(std::stod(cells[2]) == 4.0);
  CHECK(std::stod(cells[3]) == 7.0);
  CHECK(std::stod(cells[5]) == 4.0);
  CHECK(std::string(distribution_csv_header) ==
        "label,p,weak_quasinorm,l1,l2,linf");

  FitReport fit;
  fit.slope = 0.5;
  fit.intercept = -1.25;
  fit.r_squared = 0.9991;
  fit.npoints = 12;
  auto fcells = split_csv(fit_csv_row("fit", fit));
  REQUIRE(fcells.size() == 5);
  CHECK(fcells[0] == "fit");
  CHECK(std::stod(fcells[1]) == 0.5);
  CHECK(std::stoi(fcells[4]) == 12);
}
