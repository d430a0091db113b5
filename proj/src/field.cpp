#include "schrolab/field.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace schrolab {

namespace {

void check_sizes(const Grid& g, std::size_t values,
                 const std::shared_ptr<const Mask>& mask) {
  if (values != g.total_points())
    throw std::invalid_argument("Field: value count does not match grid");
  if (mask && mask->size() != g.total_points())
    throw std::invalid_argument("Field: mask size does not match grid");
}

void check_same_grid(const Field& a, const Field& b, const char* what) {
  if (!a.grid().same_as(b.grid()))
    throw std::invalid_argument(std::string(what) + ": mismatched grids");
}

}  // namespace

Field::Field(const Grid& g, std::vector<cplx> values)
    : grid_(g), values_(std::move(values)) {
  check_sizes(g, values_.size(), nullptr);
}

Field::Field(const Grid& g, std::vector<cplx> values,
             std::shared_ptr<const Mask> mask)
    : grid_(g), values_(std::move(values)), mask_(std::move(mask)) {
  check_sizes(g, values_.size(), mask_);
  if (mask_)
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!(*mask_)[i]) values_[i] = 0.0;
}

std::size_t Field::domain_points() const {
  if (!mask_) return values_.size();
  std::size_t n = 0;
  for (auto m : *mask_) n += m ? 1 : 0;
  return n;
}

Field restrict_to(const Field& f, std::shared_ptr<const Mask> mask) {
  return Field(f.grid(), f.values(), std::move(mask));
}

Field extend_by_zero(const Field& f) { return Field(f.grid(), f.values()); }

Field operator+(const Field& a, const Field& b) {
  check_same_grid(a, b, "Field+");
  Field r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Field operator-(const Field& a, const Field& b) {
  check_same_grid(a, b, "Field-");
  Field r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Field& operator+=(Field& a, const Field& b) {
  check_same_grid(a, b, "Field+=");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

Field& operator*=(Field& a, cplx s) {
  for (auto& v : a.values()) v *= s;
  return a;
}

double max_abs_diff(const Field& a, const Field& b) {
  check_same_grid(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void write_field(const Field& f, std::ostream& os) {
  const std::uint32_t dim = static_cast<std::uint32_t>(f.grid().dim());
  const std::uint32_t n = static_cast<std::uint32_t>(f.grid().points_per_axis());
  const double L = f.grid().box_length();
  os.write(reinterpret_cast<const char*>(&dim), 4);
  os.write(reinterpret_cast<const char*>(&n), 4);
  os.write(reinterpret_cast<const char*>(&L), 8);
  for (const cplx& v : f.values()) {
    const double re = v.real(), im = v.imag();
    os.write(reinterpret_cast<const char*>(&re), 8);
    os.write(reinterpret_cast<const char*>(&im), 8);
  }
  if (!os) throw std::runtime_error("write_field: stream failure");
}

void write_field(const Field& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  write_field(f, os);
}

Field read_field(std::istream& is) {
  std::uint32_t dim = 0, n = 0;
  double L = 0.0;
  is.read(reinterpret_cast<char*>(&dim), 4);
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&L), 8);
  if (!is) throw std::runtime_error("read_field: truncated header");
  const Grid g = make_grid(static_cast<int>(dim), n, L);
  std::vector<cplx> vals(g.total_points());
  for (auto& v : vals) {
    double re, im;
    is.read(reinterpret_cast<char*>(&re), 8);
    is.read(reinterpret_cast<char*>(&im), 8);
    if (!is) throw std::runtime_error("read_field: truncated payload");
    v = {re, im};
  }
  return Field(g, std::move(vals));
}

Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  return read_field(is);
}

void write_field_csv(const Field& f, std::ostream& os) {
  os << "index,re,im\n";
  char buf[80];
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, f[i].real(),
                  f[i].imag());
    os << buf;
  }
}

}  // namespace schrolab
