#pragma once
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "schrolab/parallel.hpp"

namespace schrolab {

// Multi-index into a grid; axes beyond Grid::dim() are zero.
using MultiIndex = std::array<std::int64_t, 3>;

// Empirical doubling data for the torus counting measure, filled in by
// measure_doubling().
struct DoublingReport {
  double c_doub;  // max over the scan of V(x,2r)/V(x,r)
  double n_exp;   // smallest D with V(x,lr) <= l^D V(x,r) on the scan
  double d_exp;   // exponent in V(y,r) <= (1+d(x,y)/r)^D V(x,r); by
                  // translation invariance this equals n_exp here
};

// Uniform periodic lattice on [0, L)^n with N points per axis, spacing
// h = L/N.  Immutable after construction except for the cached doubling
// report.
class Grid {
 public:
  Grid() = default;

  int dim() const { return dim_; }
  std::size_t points_per_axis() const { return points_per_axis_; }
  double box_length() const { return box_length_; }
  double spacing() const { return spacing_; }

  std::size_t total_points() const;
  // mu(X) = N^n h^n = L^n
  double total_measure() const;
  // largest possible torus distance, sqrt(n) * L/2
  double diameter() const;

  const std::optional<DoublingReport>& doubling_report() const {
    return doubling_;
  }

  bool same_as(const Grid& other) const {
    return dim_ == other.dim_ && points_per_axis_ == other.points_per_axis_ &&
           box_length_ == other.box_length_;
  }

 private:
  friend Grid make_grid(int, std::size_t, double);
  friend DoublingReport measure_doubling(Grid&, Exec);

  int dim_ = 0;
  std::size_t points_per_axis_ = 0;
  double box_length_ = 0.0;
  double spacing_ = 0.0;
  std::optional<DoublingReport> doubling_;
};

// Throws std::invalid_argument unless 1 <= dim <= 3, points_per_axis is a
// power of two >= 8, and box_length > 0.
Grid make_grid(int dim, std::size_t points_per_axis, double box_length);

std::size_t flat_index(const Grid& g, const MultiIndex& idx);
MultiIndex unflatten(const Grid& g, std::size_t flat);

// Geodesic distance on the discrete torus: per axis the shorter way
// around, combined in l2.
double torus_distance(const Grid& g, const MultiIndex& a, const MultiIndex& b);
double torus_distance(const Grid& g, std::size_t a, std::size_t b);

// Counting measure of the open ball: h^n * #{x : d(x, center) < r}.
double ball_volume(const Grid& g, std::size_t center, double r,
                   Exec ex = Exec::parallel);

// Scans radii (2^j + 1/2) h up to L/8 and dilation factors {2,4,8},
// records the observed doubling constant and growth exponents, and caches
// the report on the grid.  The half-cell offset keeps the scan radii off
// the lattice shells where open-ball counts jump.
DoublingReport measure_doubling(Grid& g, Exec ex = Exec::parallel);

namespace ref {
// Plain-loop ball count, used as the oracle for the chunked kernel.
double ball_volume(const Grid& g, std::size_t center, double r);
}  // namespace ref

}  // namespace schrolab
