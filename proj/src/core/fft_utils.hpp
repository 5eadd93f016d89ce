#pragma once

#include <complex>
#include <vector>

#include "core/common.hpp"

namespace tat {

using cplx = std::complex<double>;

/// Unnormalized 2D DFT, sign -1 (forward) or +1 (backward), row-major
/// [n0][n1]. Plans are cached per size and reused; thread safe.
void fft2(cplx* data, size_t n0, size_t n1, int sign);

/// In-place 1D transforms along a contiguous array.
void fft1(cplx* data, size_t n, int sign);

/// Zero-pad trigonometric interpolation of a periodic sequence of length n
/// onto m >= n samples (same fundamental period). Deterministic, O(n m) free
/// of plan churn for the small sizes used per table row.
void trig_interp(const double* in, size_t n, double* out, size_t m);

}  // namespace tat
