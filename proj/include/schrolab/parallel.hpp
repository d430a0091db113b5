#pragma once
#include <algorithm>
#include <cstddef>
#include <vector>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace schrolab {

// Execution policy for the data-parallel kernels.  Parallel variants use
// OpenMP with a fixed chunk structure, so results are bit-identical no
// matter how many threads run.  The serial reference implementations live
// in namespace ref and use plain loops; tests compare the two.
enum class Exec { serial, parallel };

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace detail {
inline constexpr std::size_t reduce_chunks = 256;
}

template <class F>
void parallel_for(std::size_t n, Exec ex, F&& body) {
#ifdef _OPENMP
  if (ex == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#endif
  (void)ex;
  for (std::size_t i = 0; i < n; ++i) body(i);
}

// partial(i0, i1) -> sum over [i0, i1).  Chunk partials are combined in
// index order regardless of thread count, so the result is deterministic.
template <class F>
double chunked_sum(std::size_t n, Exec ex, F&& partial) {
  if (n == 0) return 0.0;
  const std::size_t chunks = std::min(n, detail::reduce_chunks);
  std::vector<double> parts(chunks, 0.0);
  parallel_for(chunks, ex, [&](std::size_t c) {
    parts[c] = partial(n * c / chunks, n * (c + 1) / chunks);
  });
  double s = 0.0;
  for (double v : parts) s += v;
  return s;
}

template <class F>
double chunked_max(std::size_t n, Exec ex, F&& partial_max) {
  if (n == 0) return 0.0;
  const std::size_t chunks = std::min(n, detail::reduce_chunks);
  std::vector<double> parts(chunks, 0.0);
  parallel_for(chunks, ex, [&](std::size_t c) {
    parts[c] = partial_max(n * c / chunks, n * (c + 1) / chunks);
  });
  double m = parts[0];
  for (double v : parts) m = std::max(m, v);
  return m;
}

}  // namespace schrolab
