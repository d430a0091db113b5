#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "schrolab/grid.hpp"
#include "schrolab/rng.hpp"

using namespace schrolab;

TEST_CASE("make_grid basic shapes") {
  Grid g = make_grid(1, 16, 16.0);
  CHECK(g.spacing() == 1.0);
  CHECK(g.total_measure() == 16.0);
  CHECK(g.total_points() == 16);
  CHECK_FALSE(g.doubling_report().has_value());

  Grid g2 = make_grid(2, 8, 4.0);
  CHECK(g2.spacing() == 0.5);
  CHECK(g2.total_measure() == 16.0);
  CHECK(g2.total_points() == 64);

  CHECK_THROWS_AS(make_grid(1, 12, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0, 16, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4, 16, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 16, -1.0), std::invalid_argument);
}

TEST_CASE("flat index round trip") {
  Grid g = make_grid(3, 8, 8.0);
  for (std::size_t i = 0; i < g.total_points(); i += 37)
    CHECK(flat_index(g, unflatten(g, i)) == i);
  CHECK_THROWS_AS(flat_index(g, MultiIndex{8, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(unflatten(g, g.total_points()), std::invalid_argument);
}

TEST_CASE("torus distance examples") {
  Grid g = make_grid(1, 16, 16.0);
  CHECK(torus_distance(g, MultiIndex{0, 0, 0}, MultiIndex{15, 0, 0}) == 1.0);
  CHECK(torus_distance(g, MultiIndex{0, 0, 0}, MultiIndex{8, 0, 0}) == 8.0);

  Grid g2 = make_grid(2, 8, 4.0);
  CHECK(torus_distance(g2, MultiIndex{0, 0, 0}, MultiIndex{7, 4, 0}) ==
        doctest::Approx(std::sqrt(0.25 + 4.0)).epsilon(1e-15));
}

TEST_CASE("torus distance is a metric (exhaustive small grids)") {
  for (auto [dim, N] : std::vector<std::pair<int, std::size_t>>{{1, 16}, {2, 8}}) {
    Grid g = make_grid(dim, N, static_cast<double>(N));
    const std::size_t M = g.total_points();
    std::vector<double> d(M * M);
    for (std::size_t a = 0; a < M; ++a)
      for (std::size_t b = 0; b < M; ++b)
        d[a * M + b] = torus_distance(g, a, b);
    for (std::size_t a = 0; a < M; ++a) {
      CHECK(d[a * M + a] == 0.0);
      for (std::size_t b = 0; b < M; ++b)
        CHECK(d[a * M + b] == d[b * M + a]);
    }
    bool triangle_ok = true;
    for (std::size_t a = 0; a < M && triangle_ok; ++a)
      for (std::size_t b = 0; b < M && triangle_ok; ++b)
        for (std::size_t c = 0; c < M; ++c)
          if (d[a * M + c] > d[a * M + b] + d[b * M + c] + 1e-12) {
            triangle_ok = false;
            break;
          }
    CHECK(triangle_ok);
  }
}

TEST_CASE("ball volume examples") {
  Grid g = make_grid(1, 16, 16.0);
  CHECK(ball_volume(g, 0, 1.5) == 3.0);
  CHECK(ball_volume(g, 5, 100.0) == g.total_measure());

  // open disk of radius 2.5 on the integer lattice: offsets with
  // dx^2+dy^2 < 6.25 -> 1 + 4 + 4 + 4 + 8 = 21
  Grid g2 = make_grid(2, 16, 16.0);
  CHECK(ball_volume(g2, 0, 2.5) == 21.0);
  CHECK(ball_volume(g2, 0, 2.5) == ref::ball_volume(g2, 0, 2.5));
}

TEST_CASE("ball volume ignores the center and matches the reference loop") {
  Grid g = make_grid(2, 16, 8.0);
  Rng rng(11);
  const double v0 = ball_volume(g, 0, 1.3);
  for (int i = 0; i < 10; ++i) {
    const auto c = static_cast<std::size_t>(rng.integer(g.total_points()));
    CHECK(ball_volume(g, c, 1.3) == v0);
  }
  for (double r : {0.4, 0.9, 1.7, 2.9, 3.3}) {
    CHECK(ball_volume(g, 3, r) == ref::ball_volume(g, 3, r));
    CHECK(ball_volume(g, 3, r, Exec::serial) == ball_volume(g, 3, r));
  }
}

TEST_CASE("doubling exponents stay near the dimension") {
  Grid g1 = make_grid(1, 1024, 1024.0);
  DoublingReport r1 = measure_doubling(g1);
  CHECK(r1.n_exp <= 1.2);
  CHECK(r1.n_exp > 0.5);
  CHECK(r1.d_exp == r1.n_exp);
  CHECK(g1.doubling_report().has_value());
  CHECK(g1.doubling_report()->c_doub == r1.c_doub);

  Grid g2 = make_grid(2, 64, 64.0);
  DoublingReport r2 = measure_doubling(g2);
  CHECK(r2.c_doub <= 4.5);
  CHECK(r2.n_exp <= 2.2);

  Grid g3 = make_grid(3, 16, 16.0);
  DoublingReport r3 = measure_doubling(g3);
  CHECK(r3.n_exp <= 3.2);
}
