#pragma once
#include <memory>
#include <string>

#include "schrolab/field.hpp"

namespace schrolab {

// Built-in potential fields, selected by label:
//   "zero" | "harmonic:w=…" (torus-periodic 0.5 w^2 d(x,center)^2)
//   | "randnonneg:seed=…" (|gaussian| i.i.d.)
// or "csv:…" is not handled here — CSV loading lives with the config.
Field make_potential(const Grid& g, const std::string& spec);

// Built-in subdomain masks: "disk:r=…" (ball around the box center) or
// "lshape" (square minus one quadrant; needs dim >= 2).
std::shared_ptr<const Mask> make_mask(const Grid& g, const std::string& spec);

}  // namespace schrolab
