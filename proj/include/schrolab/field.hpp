#pragma once
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "schrolab/grid.hpp"

namespace schrolab {

using cplx = std::complex<double>;
using Mask = std::vector<std::uint8_t>;  // 1 = inside the subdomain

// Complex-valued function on a grid.  A field may carry a subdomain mask;
// the invariant (enforced on construction and after restriction) is that
// values vanish outside the mask, so a masked field and its extension by
// zero share the same array.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& g) : grid_(g), values_(g.total_points()) {}
  Field(const Grid& g, std::vector<cplx> values);
  Field(const Grid& g, std::vector<cplx> values,
        std::shared_ptr<const Mask> mask);

  const Grid& grid() const { return grid_; }
  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  bool has_mask() const { return mask_ != nullptr; }
  const std::shared_ptr<const Mask>& mask() const { return mask_; }

  // number of mask cells (total_points when unmasked)
  std::size_t domain_points() const;

 private:
  Grid grid_;
  std::vector<cplx> values_;
  std::shared_ptr<const Mask> mask_;
};

// Zeroes values outside the mask and attaches it.
Field restrict_to(const Field& f, std::shared_ptr<const Mask> mask);
// Drops the mask; values are already zero outside it so this is exact and
// restrict_to(extend_by_zero(f), f.mask()) == f.
Field extend_by_zero(const Field& f);

// elementwise helpers used throughout the experiments
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field& operator+=(Field& a, const Field& b);
Field& operator*=(Field& a, cplx s);
double max_abs_diff(const Field& a, const Field& b);

// Binary layout: u32 dim, u32 points_per_axis, f64 box_length, then
// total_points (re, im) f64 pairs, all little-endian, row-major with axis
// 0 slowest.
void write_field(const Field& f, std::ostream& os);
void write_field(const Field& f, const std::string& path);
Field read_field(std::istream& is);
Field read_field(const std::string& path);

// CSV with header "index,re,im", one row per grid point.
void write_field_csv(const Field& f, std::ostream& os);

}  // namespace schrolab
