#include "schrolab/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace schrolab {

namespace {

using TwiddleTable = std::vector<cplx>;  // forward twiddles, all stages flat

// Stage with half-length H occupies [H-1, 2H-2): entry j is
// exp(-i pi j / H).  Tables are cached per transform size; the cache is
// shared across threads.
std::shared_ptr<const TwiddleTable> twiddles_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const TwiddleTable>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  auto table = std::make_shared<TwiddleTable>(n - 1);
  for (std::size_t half = 1; half < n; half *= 2) {
    const double step = -std::numbers::pi / static_cast<double>(half);
    for (std::size_t j = 0; j < half; ++j)
      (*table)[half - 1 + j] = std::polar(1.0, step * static_cast<double>(j));
  }
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(n, std::move(table));
  (void)inserted;
  return it->second;
}

void bit_reverse(cplx* a, std::size_t n) {
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
}

}  // namespace

void fft_pow2(cplx* a, std::size_t n, bool inverse, Exec ex) {
  if (n == 0 || (n & (n - 1)))
    throw std::invalid_argument("fft_pow2: length must be a power of two");
  if (n == 1) return;
  const auto table = twiddles_for(n);
  bit_reverse(a, n);
  const bool par = ex == Exec::parallel && n >= (std::size_t{1} << 14);
  for (std::size_t half = 1; half < n; half *= 2) {
    const cplx* w = table->data() + (half - 1);
    const std::size_t len = half * 2;
    auto butterfly = [&](std::size_t b) {
      const std::size_t blk = b / half, j = b % half;
      const std::size_t i = blk * len + j;
      const cplx tw = inverse ? std::conj(w[j]) : w[j];
      const cplx u = a[i], v = a[i + half] * tw;
      a[i] = u + v;
      a[i + half] = u - v;
    };
    // each butterfly touches a disjoint pair, so the parallel pass is
    // bit-identical to the serial one
    parallel_for(n / 2, par ? Exec::parallel : Exec::serial, butterfly);
  }
}

void fft_nd(std::vector<cplx>& data, int dim, std::size_t N, bool inverse,
            Exec ex) {
  const std::size_t total = data.size();
  if (dim == 1) {
    if (total != N) throw std::invalid_argument("fft_nd: size mismatch");
    fft_pow2(data.data(), N, inverse, ex);
    return;
  }
  const std::size_t lines = total / N;
  for (int axis = 0; axis < dim; ++axis) {
    std::size_t stride = 1;
    for (int a = axis + 1; a < dim; ++a) stride *= N;
    if (stride == 1) {
      parallel_for(lines, ex, [&](std::size_t l) {
        fft_pow2(data.data() + l * N, N, inverse, Exec::serial);
      });
    } else {
      parallel_for(lines, ex, [&](std::size_t l) {
        const std::size_t outer = l / stride, inner = l % stride;
        const std::size_t base = outer * stride * N + inner;
        std::vector<cplx> buf(N);
        for (std::size_t t = 0; t < N; ++t) buf[t] = data[base + t * stride];
        fft_pow2(buf.data(), N, inverse, Exec::serial);
        for (std::size_t t = 0; t < N; ++t) data[base + t * stride] = buf[t];
      });
    }
  }
}

Field spectral_transform(const Field& f, SpectralDir dir, Exec ex) {
  if (f.has_mask())
    throw std::invalid_argument(
        "spectral_transform: masked fields have no lattice spectrum; use a "
        "matrix-backed model");
  const Grid& g = f.grid();
  const int n = g.dim();
  Field out = f;
  fft_nd(out.values(), n, g.points_per_axis(), dir == SpectralDir::inverse, ex);
  const double two_pi = 2.0 * std::numbers::pi;
  const double scale =
      dir == SpectralDir::forward
          ? std::pow(g.spacing(), n) * std::pow(two_pi, -0.5 * n)
          : std::pow(two_pi, 0.5 * n) / std::pow(g.box_length(), n);
  out *= scale;
  return out;
}

double lattice_frequency(const Grid& g, std::size_t axis_index) {
  const std::size_t N = g.points_per_axis();
  const double k = axis_index < N / 2
                       ? static_cast<double>(axis_index)
                       : static_cast<double>(axis_index) - static_cast<double>(N);
  return 2.0 * std::numbers::pi * k / g.box_length();
}

namespace ref {
std::vector<cplx> dft_1d(const std::vector<cplx>& in, bool inverse) {
  const std::size_t n = in.size();
  std::vector<cplx> out(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * std::numbers::pi *
                         static_cast<double>(k) * static_cast<double>(j) /
                         static_cast<double>(n);
      acc += in[j] * std::polar(1.0, ang);
    }
    out[k] = acc;
  }
  return out;
}
}  // namespace ref

}  // namespace schrolab
