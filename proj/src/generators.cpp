#include "schrolab/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "schrolab/labels.hpp"
#include "schrolab/rng.hpp"

namespace schrolab {

namespace {

std::size_t center_index(const Grid& g) {
  MultiIndex c{0, 0, 0};
  for (int a = 0; a < g.dim(); ++a)
    c[a] = static_cast<std::int64_t>(g.points_per_axis() / 2);
  return flat_index(g, c);
}

}  // namespace

Field make_potential(const Grid& g, const std::string& spec) {
  const LabelSpec label = parse_label(spec);
  Field V(g);
  if (label.name == "zero") {
    allow_keys(label, {}, {}, "make_potential");
    return V;
  }
  if (label.name == "harmonic") {
    allow_keys(label, {"w"}, {}, "make_potential");
    const double w = require_param(label, "w");
    const std::size_t c = center_index(g);
    for (std::size_t i = 0; i < V.size(); ++i) {
      const double d = torus_distance(g, i, c);
      V[i] = 0.5 * w * w * d * d;
    }
    return V;
  }
  if (label.name == "randnonneg") {
    allow_keys(label, {"seed"}, {}, "make_potential");
    Rng rng(static_cast<std::uint64_t>(require_int(label, "seed")));
    for (std::size_t i = 0; i < V.size(); ++i)
      V[i] = std::abs(rng.gaussian());
    return V;
  }
  throw std::invalid_argument("make_potential: unknown generator '" +
                              label.name + "'");
}

std::shared_ptr<const Mask> make_mask(const Grid& g, const std::string& spec) {
  const LabelSpec label = parse_label(spec);
  auto mask = std::make_shared<Mask>(g.total_points(), std::uint8_t{0});
  if (label.name == "disk") {
    allow_keys(label, {"r"}, {}, "make_mask");
    const double r = require_param(label, "r");
    if (!(r > 0.0))
      throw std::invalid_argument("make_mask: disk radius must be > 0");
    const std::size_t c = center_index(g);
    for (std::size_t i = 0; i < mask->size(); ++i)
      (*mask)[i] = torus_distance(g, i, c) < r ? 1 : 0;
  } else if (label.name == "lshape") {
    allow_keys(label, {}, {}, "make_mask");
    if (g.dim() < 2)
      throw std::invalid_argument("make_mask: lshape needs dim >= 2");
    const auto half = static_cast<std::int64_t>(g.points_per_axis() / 2);
    for (std::size_t i = 0; i < mask->size(); ++i) {
      const MultiIndex idx = unflatten(g, i);
      (*mask)[i] = (idx[0] >= half && idx[1] >= half) ? 0 : 1;
    }
  } else {
    throw std::invalid_argument("make_mask: unknown generator '" + label.name +
                                "'");
  }
  bool any = false;
  for (auto m : *mask) any = any || m;
  if (!any) throw std::invalid_argument("make_mask: mask is empty");
  return mask;
}

}  // namespace schrolab
