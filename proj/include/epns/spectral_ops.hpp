#pragma once

#include "epns/field.hpp"

namespace epns {

// Mean-zero solution U of  -Lap U = rho - mean(rho).
// Requires mean(rho) > 0 and a sane grid.
SpectralScalar solve_poisson(const SpectralScalar& rho);

enum class KernelKind { exact, regularized };

// Convolution with the Coulomb interaction kernel. `h` must be mean-zero.
//   exact:        K*h with the torus Green's function, -Lap(K*h) = h, mean zero.
//   regularized:  the log-mollified kernel sampled on the grid (d=2 only),
//                 mean-shifted to zero, applied by Fourier multiplication.
SpectralScalar convolve_kernel(const SpectralScalar& h, KernelKind kind, double eps_k = 0.0);

// Spectral differentiation. Odd derivatives drop the Nyquist mode; the
// Laplacian uses the same convention so divergence(gradient(f)) == laplacian(f).
SpectralVector gradient(const SpectralScalar& f);
SpectralScalar divergence(const SpectralVector& v);
SpectralScalar laplacian(const SpectralScalar& f);

// 2/3-rule dealiasing: zero all modes with any |k_i| > n/3.
void dealias(std::vector<cplx>& coeffs, const TorusGrid& g);
SpectralScalar dealias(const SpectralScalar& f);
// Dealiased pointwise product (both factors truncated, then the result).
SpectralScalar dealiased_product(const SpectralScalar& a, const SpectralScalar& b);

// v - grad(invLap(div v)); requires dim == 2. Mean modes are untouched.
SpectralVector leray_project(const SpectralVector& v);

// ((2pi)^d sum_{k != 0} |h_k|^2 / |k|^2)^{1/2}; `h` must be mean-zero.
double h_minus1_norm(const SpectralScalar& h);

// ((2pi)^d sum_k (1+|k|^2)^s |f_k|^2)^{1/2}, s >= 0.
double sobolev_norm(const SpectralScalar& f, double s);
double sobolev_norm(const SpectralVector& v, double s);

// Translate a field by a constant offset (exact phase shift, per dimension).
SpectralScalar translate(const SpectralScalar& f, const double* shift);

} // namespace epns
