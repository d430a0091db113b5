#pragma once
#include <vector>

#include "schrolab/field.hpp"
#include "schrolab/parallel.hpp"

namespace schrolab {

enum class SpectralDir { forward, inverse };

// In-place radix-2 FFT, unscaled; inverse means conjugate twiddles.
// Lengths must be powers of two.
void fft_pow2(cplx* data, std::size_t n, bool inverse, Exec ex = Exec::serial);

// Applies fft_pow2 along every axis of a row-major dim-dimensional cube
// with N points per axis (axis 0 slowest).  Parallelises across lines.
void fft_nd(std::vector<cplx>& data, int dim, std::size_t N, bool inverse,
            Exec ex = Exec::parallel);

// Unitary transform pair on the torus.  Forward approximates the integral
// transform (2pi)^{-n/2} sum f(x) e^{-i xi x} h^n at the lattice
// frequencies xi_k = 2 pi k / L, k in [-N/2, N/2) per axis (stored in
// wrap-around order).  Inverse composes to the identity and both preserve
// the weighted l2 norm (Plancherel with weights h^n and (2pi/L)^n).
// Masked fields are rejected; subdomain models use the matrix route.
Field spectral_transform(const Field& f, SpectralDir dir,
                         Exec ex = Exec::parallel);

// Signed frequency component on axis `a` for row-major flat index bits
// ka in [0,N): ka or ka - N, times 2 pi / L.
double lattice_frequency(const Grid& g, std::size_t axis_index);

namespace ref {
// O(n^2) discrete Fourier transform, the oracle for fft_pow2.
std::vector<cplx> dft_1d(const std::vector<cplx>& in, bool inverse);
}  // namespace ref

}  // namespace schrolab
