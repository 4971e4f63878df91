#pragma once

#include <complex>
#include <vector>

#include "epns/grid.hpp"

namespace epns {

using cplx = std::complex<double>;

// Thin cache of FFTW complex plans keyed by (rank, n). Plans are created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so execution is deterministic and safe on any
// caller buffer; plan creation is serialized internally, execution is not.
namespace fft {

// In-place c2c transform of a contiguous array shaped [n]^rank, row-major.
// sign = -1 forward, +1 backward. No normalization is applied.
void transform(int rank, int n, cplx* data, int sign);

// Forward coefficients in the convention  f(x) = sum_k c_k e^{i k.x},
// i.e. c_k = n^{-dim} * DFT(f). Layout: FFT bin order per dimension.
std::vector<cplx> forward(const TorusGrid& g, const std::vector<double>& real_values);

// Inverse of `forward`; imaginary residue is dropped.
std::vector<double> inverse_real(const TorusGrid& g, std::vector<cplx> coeffs);

// 1D helpers for velocity-space lines (length n, contiguous).
void line_forward(int n, cplx* data);   // divides by n
void line_backward(int n, cplx* data);  // no scaling

} // namespace fft
} // namespace epns
