#include "schrolab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace schrolab {

namespace {

bool is_pow2(std::size_t v) { return v >= 1 && (v & (v - 1)) == 0; }

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

std::size_t Grid::total_points() const { return ipow(points_per_axis_, dim_); }

double Grid::total_measure() const {
  return std::pow(box_length_, static_cast<double>(dim_));
}

double Grid::diameter() const {
  return std::sqrt(static_cast<double>(dim_)) * box_length_ / 2.0;
}

Grid make_grid(int dim, std::size_t points_per_axis, double box_length) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("make_grid: dim must be 1, 2 or 3, got " +
                                std::to_string(dim));
  if (!is_pow2(points_per_axis) || points_per_axis < 8)
    throw std::invalid_argument(
        "make_grid: points_per_axis must be a power of two >= 8, got " +
        std::to_string(points_per_axis));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw std::invalid_argument("make_grid: box_length must be positive");
  Grid g;
  g.dim_ = dim;
  g.points_per_axis_ = points_per_axis;
  g.box_length_ = box_length;
  g.spacing_ = box_length / static_cast<double>(points_per_axis);
  return g;
}

std::size_t flat_index(const Grid& g, const MultiIndex& idx) {
  const auto N = static_cast<std::int64_t>(g.points_per_axis());
  std::size_t flat = 0;
  for (int a = 0; a < g.dim(); ++a) {
    if (idx[a] < 0 || idx[a] >= N)
      throw std::invalid_argument("flat_index: index out of range on axis " +
                                  std::to_string(a));
    flat = flat * g.points_per_axis() + static_cast<std::size_t>(idx[a]);
  }
  return flat;
}

MultiIndex unflatten(const Grid& g, std::size_t flat) {
  if (flat >= g.total_points())
    throw std::invalid_argument("unflatten: flat index out of range");
  MultiIndex idx{0, 0, 0};
  for (int a = g.dim() - 1; a >= 0; --a) {
    idx[a] = static_cast<std::int64_t>(flat % g.points_per_axis());
    flat /= g.points_per_axis();
  }
  return idx;
}

double torus_distance(const Grid& g, const MultiIndex& a, const MultiIndex& b) {
  const auto N = static_cast<std::int64_t>(g.points_per_axis());
  double sq = 0.0;
  for (int ax = 0; ax < g.dim(); ++ax) {
    std::int64_t d = a[ax] - b[ax];
    if (d < 0) d = -d;
    d %= N;
    d = std::min(d, N - d);
    const double dd = static_cast<double>(d) * g.spacing();
    sq += dd * dd;
  }
  return std::sqrt(sq);
}

double torus_distance(const Grid& g, std::size_t a, std::size_t b) {
  return torus_distance(g, unflatten(g, a), unflatten(g, b));
}

namespace {

// shared by the chunked kernel and the reference loop
inline bool in_ball(const Grid& g, const MultiIndex& c, std::size_t flat,
                    double r2) {
  const auto N = static_cast<std::int64_t>(g.points_per_axis());
  double sq = 0.0;
  for (int a = g.dim() - 1; a >= 0; --a) {
    std::int64_t d = static_cast<std::int64_t>(flat % g.points_per_axis()) - c[a];
    flat /= g.points_per_axis();
    if (d < 0) d = -d;
    d = std::min(d, N - d);
    const double dd = static_cast<double>(d) * g.spacing();
    sq += dd * dd;
  }
  return sq < r2;
}

}  // namespace

double ball_volume(const Grid& g, std::size_t center, double r, Exec ex) {
  if (!(r > 0.0)) throw std::invalid_argument("ball_volume: radius must be > 0");
  if (center >= g.total_points())
    throw std::invalid_argument("ball_volume: center out of range");
  const MultiIndex c = unflatten(g, center);
  const double r2 = r * r;
  const double count = chunked_sum(
      g.total_points(), ex, [&](std::size_t i0, std::size_t i1) {
        double n = 0.0;
        for (std::size_t i = i0; i < i1; ++i)
          if (in_ball(g, c, i, r2)) n += 1.0;
        return n;
      });
  return count * std::pow(g.spacing(), g.dim());
}

namespace ref {
double ball_volume(const Grid& g, std::size_t center, double r) {
  const MultiIndex c = unflatten(g, center);
  std::size_t n = 0;
  for (std::size_t i = 0; i < g.total_points(); ++i)
    if (in_ball(g, c, i, r * r)) ++n;
  return static_cast<double>(n) * std::pow(g.spacing(), g.dim());
}
}  // namespace ref

DoublingReport measure_doubling(Grid& g, Exec ex) {
  const double h = g.spacing();
  const double cap = g.box_length() / 8.0;
  const double factors[] = {2.0, 4.0, 8.0};

  double c_doub = 0.0;
  double n_exp = 0.0;
  for (int j = 0;; ++j) {
    const double r = (std::exp2(j) + 0.5) * h;
    if (j > 0 && r > cap) break;
    const double v1 = ball_volume(g, 0, r, ex);
    for (double l : factors) {
      const double vl = ball_volume(g, 0, l * r, ex);
      if (l == 2.0) c_doub = std::max(c_doub, vl / v1);
      n_exp = std::max(n_exp, std::log(vl / v1) / std::log(l));
    }
  }
  DoublingReport rep{c_doub, n_exp, n_exp};
  g.doubling_ = rep;
  return rep;
}

}  // namespace schrolab
