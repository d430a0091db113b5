#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "schrolab/experiments.hpp"
#include "schrolab/norms.hpp"

using namespace schrolab;

namespace {

ExperimentConfig tiny() {
  ExperimentConfig c;
  c.N = 64;
  c.L_box = 16.0;
  c.t_sweep = {0, 1, 2, 4};
  c.k_sweep = {1, 2};
  c.p_sweep = {2};
  c.probes = 2;
  return c;
}

}  // namespace

TEST_CASE("report_csv has the stable schema") {
  ExperimentReport rep;
  rep.kind = "demo";
  rep.rows.push_back({"a=1;b=2", 3.0, 4.0, 0.75});
  const std::string csv = report_csv(rep);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header == std::string(experiment_csv_header));
  const std::string row = csv.substr(csv.find('\n') + 1);
  // params field carries no commas, so every row has exactly 3 separators
  CHECK(std::count(row.begin(), row.end(), ',') == 3);
  CHECK(row.find("a=1;b=2,3,4,0.75") == 0);
}

TEST_CASE("delta probe carries unit mass") {
  Grid g = make_grid(1, 16, 8.0);  // h = 1/2
  Field f = delta_probe(g, 3);
  CHECK(std::abs(f[3].real() - 2.0) < 1e-15);
  CHECK(lp_norm(f, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sparse probe is unit mass and seed-deterministic") {
  Grid g = make_grid(1, 64, 64.0);
  Field a = sparse_probe(g, 5);
  Field b = sparse_probe(g, 5);
  CHECK(max_abs_diff(a, b) == 0.0);
  CHECK(lp_norm(a, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  std::size_t support = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i]) > 0) ++support;
  CHECK(support >= 1);
  CHECK(support <= 16);
  Field c = sparse_probe(g, 6);
  CHECK(max_abs_diff(a, c) > 0.0);
}

TEST_CASE("bandlimited probe vanishes when the grid has no high modes") {
  // largest |xi| = pi N / L = pi/8 < 1/2: the cutoff kills everything
  Grid coarse = make_grid(1, 8, 64.0);
  CHECK(lp_norm(bandlimited_probe(coarse), 1.0) == 0.0);

  Grid fine = make_grid(1, 64, 16.0);
  Field f = bandlimited_probe(fine);
  CHECK(lp_norm(f, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("partition check passes at full resolution") {
  ExperimentReport rep = run_partition_check(tiny());
  CHECK(rep.pass);
  CHECK(rep.rows.size() == 1);
  CHECK(rep.summary.at("max_deviation") <= 1e-12);
}

TEST_CASE("calculus oracle agrees across the two calculi") {
  ExperimentReport rep = run_calculus_oracle(tiny());
  CHECK(rep.pass);
  CHECK(rep.rows.size() == 10);  // 2 grids x 5 symbols
  CHECK(rep.summary.at("max_rel_error") <= 1e-9);
}

TEST_CASE("decomposition batch passes on small grids") {
  ExperimentConfig c = tiny();
  ExperimentReport rep = run_cz_check(c);
  CHECK(rep.pass);
  CHECK(rep.rows.size() == 150);  // 50 fields x 3 heights
  CHECK(rep.summary.at("max_c_iv") <= 1.0 + 1e-12);
}

TEST_CASE("p=2 rows are flat and the report is deterministic") {
  ExperimentConfig c = tiny();
  ExperimentReport rep = run_lp_bound(c);
  CHECK(rep.pass);
  for (const ExperimentRow& r : rep.rows) {
    CHECK(r.measured <= 1.0 + 1e-10);
    CHECK(r.measured > 0.9);
  }
  ExperimentReport again = run_lp_bound(c);
  CHECK(report_csv(rep) == report_csv(again));
}

TEST_CASE("sharpness rejects unusable configurations") {
  ExperimentConfig c = tiny();
  c.t_sweep = {8};  // needs L_box >= 36 > 16
  CHECK_THROWS_AS(run_sharpness(c), std::invalid_argument);

  ExperimentConfig c2 = tiny();
  c2.t_sweep.clear();
  CHECK_THROWS_AS(run_sharpness(c2), std::invalid_argument);

  ExperimentConfig c3 = tiny();
  c3.op = "schrodinger";  // needs the fourier route
  CHECK_THROWS_AS(run_sharpness(c3), std::invalid_argument);
}

TEST_CASE("weak11 needs at least three sweep times") {
  ExperimentConfig c = tiny();
  c.t_sweep = {1, 2};
  CHECK_THROWS_AS(run_weak11_upper(c), std::invalid_argument);
}

TEST_CASE("tail integral rejects a box that cannot hold the annulus") {
  ExperimentConfig c = tiny();
  c.t_sweep = {16};
  c.k_sweep = {1, 2, 3, 4};
  CHECK_THROWS_AS(run_tail_integral(c), std::invalid_argument);
}

TEST_CASE("envelope check enforces the admissible smoothness window") {
  ExperimentConfig c = tiny();
  c.s_sweep = {2.0};  // n = 1 requires 1 < s < 1.5
  CHECK_THROWS_AS(run_besov_envelope(c), std::invalid_argument);
  c.s_sweep = {0.9};
  CHECK_THROWS_AS(run_besov_envelope(c), std::invalid_argument);
}

TEST_CASE("unknown kernel check kind is rejected") {
  CHECK_THROWS_AS(run_kernel_check("nonsense", tiny()),
                  std::invalid_argument);
}

TEST_CASE("small harnack run passes and reports every annulus") {
  ExperimentConfig c = tiny();
  c.N = 256;
  c.L_box = 1.0;
  c.t_sweep = {0.25, 1};
  ExperimentReport rep = run_kernel_check("harnack_annulus", c);
  CHECK(rep.pass);
  // L/8 down to 4h = 1/64: radii 1/8, 1/16, 1/32, 1/64 per time
  CHECK(rep.rows.size() == 8);
  for (const ExperimentRow& r : rep.rows) CHECK(r.ratio <= 1.0);
}

TEST_CASE("submultiplicativity battery passes") {
  ExperimentReport rep = run_besov_submult(tiny());
  CHECK(rep.pass);
  CHECK(rep.rows.size() == 10);
  CHECK(rep.summary.at("max_ratio") <= 1.0 + 1e-5);
}
