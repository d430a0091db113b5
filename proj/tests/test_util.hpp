#pragma once
#include "schrolab/field.hpp"
#include "schrolab/rng.hpp"

namespace schrolab::test {

inline Field random_field(const Grid& g, std::uint64_t seed) {
  Rng rng(seed);
  Field f(g);
  for (auto& v : f.values()) v = {rng.gaussian(), rng.gaussian()};
  return f;
}

inline Field random_real_nonneg(const Grid& g, std::uint64_t seed) {
  Rng rng(seed);
  Field f(g);
  for (auto& v : f.values()) v = std::abs(rng.gaussian());
  return f;
}

}  // namespace schrolab::test
