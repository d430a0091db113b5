#include "schrolab/cz.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "schrolab/norms.hpp"

namespace schrolab {

namespace {

// iterate the cells of a dyadic cube (corner in cells, side 2^level cells)
template <class Body>
void for_each_cell(const Grid& g, const MultiIndex& corner, int level,
                   Body&& body) {
  const std::int64_t side = std::int64_t{1} << level;
  MultiIndex off{0, 0, 0};
  for (;;) {
    MultiIndex idx = corner;
    for (int a = 0; a < g.dim(); ++a) idx[a] += off[a];
    body(flat_index(g, idx));
    int a = g.dim() - 1;
    for (; a >= 0; --a) {
      if (++off[a] < side) break;
      off[a] = 0;
    }
    if (a < 0) break;
  }
}

struct Walker {
  const Grid& grid;
  const Field& f;
  double height;
  std::vector<CZBadPart>* bad;
  Field* good;

  // mean of |f| over the cube, long double accumulation
  double abs_mean(const MultiIndex& corner, int level) const {
    long double s = 0.0L;
    for_each_cell(grid, corner, level,
                  [&](std::size_t i) { s += std::abs(f[i]); });
    const auto cells = static_cast<long double>(std::int64_t{1}
                                                << (level * grid.dim()));
    return static_cast<double>(s / cells);
  }

  void select(const MultiIndex& corner, int level) {
    std::complex<long double> s = 0.0L;
    std::int64_t cells = 0;
    for_each_cell(grid, corner, level, [&](std::size_t i) {
      s += std::complex<long double>(f[i]);
      ++cells;
    });
    const cplx avg(static_cast<double>(s.real() / cells),
                   static_cast<double>(s.imag() / cells));

    CZBadPart part;
    part.cube.corner = corner;
    part.cube.level = level;
    part.cube.side = std::ldexp(grid.spacing(), level);
    part.cube.scale_k = std::ilogb(part.cube.side / 2.0);
    part.b = Field(grid);
    double mass = 0.0;
    for_each_cell(grid, corner, level, [&](std::size_t i) {
      part.b[i] = f[i] - avg;
      mass += std::abs(part.b[i]);
      (*good)[i] = avg;
    });
    part.cube.mass = mass * std::pow(grid.spacing(), grid.dim());
    bad->push_back(std::move(part));
  }

  // examine the children of the cube at (corner, level)
  void descend(const MultiIndex& corner, int level) {
    const int child = level - 1;
    const std::int64_t step = std::int64_t{1} << child;
    const int ncomb = 1 << grid.dim();
    for (int c = 0; c < ncomb; ++c) {
      MultiIndex cc = corner;
      for (int a = 0; a < grid.dim(); ++a)
        if (c & (1 << a)) cc[a] += step;
      if (abs_mean(cc, child) > height)
        select(cc, child);
      else if (child > 0)
        descend(cc, child);
    }
  }
};

}  // namespace

CZResult cz_decompose(const Field& f, double height) {
  const Grid& g = f.grid();
  const double global_mean =
      lp_norm(f, 1.0) / g.total_measure();  // = mean of |f| values
  if (!(height > global_mean))
    throw std::invalid_argument(
        "cz_decompose: height must exceed mean |f| (" +
        std::to_string(global_mean) + "), else the root cube is selected");

  CZResult r;
  r.height = height;
  r.good = f;
  r.overlap_bound = 1;

  const int root_level = std::ilogb(static_cast<double>(g.points_per_axis()));
  Walker walker{g, f, height, &r.bad, &r.good};
  walker.descend(MultiIndex{0, 0, 0}, root_level);

  r.constants = cz_verify(r, f);
  return r;
}

CZConstantsReport cz_verify(const CZResult& r, const Field& f) {
  const Grid& g = f.grid();
  const double cell = std::pow(g.spacing(), g.dim());
  const double l1 = lp_norm(f, 1.0);

  CZConstantsReport rep;
  rep.c_ii = lp_norm(r.good, std::numeric_limits<double>::infinity()) / r.height;
  const double l2 = lp_norm(r.good, 2.0);
  rep.c_l2 = l2 * l2 / (r.height * l1);

  Field sum = r.good;
  double cube_measure = 0.0;
  std::vector<std::uint8_t> occupancy(g.total_points(), 0);
  rep.cubes_disjoint = true;
  rep.supports_ok = true;
  for (const CZBadPart& part : r.bad) {
    sum += part.b;
    cube_measure += std::pow(part.cube.side, g.dim());

    std::vector<std::uint8_t> inside(g.total_points(), 0);
    for_each_cell(g, part.cube.corner, part.cube.level, [&](std::size_t i) {
      inside[i] = 1;
      if (occupancy[i]) rep.cubes_disjoint = false;
      occupancy[i] = 1;
    });
    cplx mean = 0.0;
    for (std::size_t i = 0; i < g.total_points(); ++i) {
      if (!inside[i] && part.b[i] != 0.0) rep.supports_ok = false;
      mean += part.b[i];
    }
    rep.max_mean_abs = std::max(rep.max_mean_abs, std::abs(mean) * cell);
  }
  rep.c_iv = r.height * cube_measure / l1;
  rep.recon_error = max_abs_diff(sum, f);

  const double scale = std::max(
      1.0, lp_norm(f, std::numeric_limits<double>::infinity()));
  const double pow2n = std::pow(2.0, g.dim());
  rep.pass = rep.recon_error <= 1e-12 * scale &&
             rep.c_ii <= pow2n * (1.0 + 1e-12) &&
             rep.c_iv <= 1.0 + 1e-12 &&
             rep.max_mean_abs <= 1e-12 * std::max(1.0, l1) &&
             rep.cubes_disjoint && rep.supports_ok;
  return rep;
}

std::pair<Field, Field> cz_split_scales(const CZResult& r, int k0) {
  Field h1(r.good.grid()), h2(r.good.grid());
  for (const CZBadPart& part : r.bad)
    (part.cube.scale_k <= k0 ? h1 : h2) += part.b;
  return {std::move(h1), std::move(h2)};
}

std::map<int, Field> cz_scale_buckets(const CZResult& r) {
  std::map<int, Field> buckets;
  for (const CZBadPart& part : r.bad) {
    auto it = buckets.find(part.cube.scale_k);
    if (it == buckets.end())
      it = buckets.emplace(part.cube.scale_k, Field(r.good.grid())).first;
    it->second += part.b;
  }
  return buckets;
}

std::string cz_cube_csv(const CZResult& r) {
  std::string out = "scale_k,corner0,corner1,corner2,side,mass\n";
  char buf[160];
  for (const CZBadPart& part : r.bad) {
    std::snprintf(buf, sizeof buf, "%d,%lld,%lld,%lld,%.17g,%.17g\n",
                  part.cube.scale_k,
                  static_cast<long long>(part.cube.corner[0]),
                  static_cast<long long>(part.cube.corner[1]),
                  static_cast<long long>(part.cube.corner[2]), part.cube.side,
                  part.cube.mass);
    out += buf;
  }
  return out;
}

}  // namespace schrolab
