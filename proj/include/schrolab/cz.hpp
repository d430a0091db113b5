#pragma once
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "schrolab/field.hpp"

namespace schrolab {

// Dyadic cube on the torus: corner in cell units, side 2^level cells.
// scale_k buckets the cube by its "radius" (half the side length):
// 2^scale_k <= side/2 < 2^(scale_k+1).
struct CZCube {
  MultiIndex corner{0, 0, 0};
  int level = 0;
  double side = 0.0;  // physical side length, 2^level * h
  int scale_k = 0;
  double mass = 0.0;  // l1 mass of b_j
};

struct CZBadPart {
  CZCube cube;
  Field b;  // supported in the cube, mean zero
};

struct CZConstantsReport {
  double c_ii = 0.0;          // ||g||_inf / height
  double c_iv = 0.0;          // height * sum mu(B_j) / ||f||_1
  double c_l2 = 0.0;          // ||g||_2^2 / (height * ||f||_1)
  double recon_error = 0.0;   // max |f - g - sum b_j|
  double max_mean_abs = 0.0;  // max_j |integral of b_j|
  bool cubes_disjoint = false;
  bool supports_ok = false;
  bool pass = false;
};

// good + sum of bad parts reconstructs the input; cubes are pairwise
// disjoint so the overlap bound is 1.
struct CZResult {
  double height = 0.0;
  Field good;
  std::vector<CZBadPart> bad;
  int overlap_bound = 1;
  CZConstantsReport constants;
};

// Stopping time over the dyadic cube tree: selects maximal cubes whose
// average of |f| exceeds `height`, replaces f there by its cube average.
// Requires height > ||f||_1 / mu(X), else the root would be selected.
CZResult cz_decompose(const Field& f, double height);

// Recomputes every invariant from scratch (independent second path).
CZConstantsReport cz_verify(const CZResult& r, const Field& f);

// (h1, h2): bad parts with scale_k <= k0 and the rest; h1 + h2 = sum b_j.
std::pair<Field, Field> cz_split_scales(const CZResult& r, int k0);

// bad parts grouped and summed by scale_k
std::map<int, Field> cz_scale_buckets(const CZResult& r);

// one row per cube: scale_k,corner0,corner1,corner2,side,mass
std::string cz_cube_csv(const CZResult& r);

}  // namespace schrolab
