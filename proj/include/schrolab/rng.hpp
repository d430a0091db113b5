#pragma once
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace schrolab {

// mt19937_64 with hand-rolled distributions, so streams are identical
// across standard libraries (std::normal_distribution is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {  // Box-Muller, fresh pair per call
    const double u = 1.0 - uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(2.0 * std::numbers::pi * v);
  }

  // [0, n); modulo bias is irrelevant at the sizes used here
  std::uint64_t integer(std::uint64_t n) { return eng_() % n; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace schrolab
