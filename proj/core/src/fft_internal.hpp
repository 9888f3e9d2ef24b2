#pragma once

#include <complex>
#include <vector>

namespace vexlp::detail {

// Unnormalized complex DFT, in math sign convention:
//   forward:  A_t = sum_j z_j exp(-2pi i j.t / N)
//   backward: B_j = sum_t z_t exp(+2pi i j.t / N)
// dimension 1: length N; dimension 2: N x N row-major.
void fft(std::vector<std::complex<double>>& data, int dimension, int n,
         bool forward);

// Signed per-axis wavenumber of FFT bin t: t for t < N/2, t - N otherwise.
inline int signed_wavenumber(int t, int n) { return t < n / 2 ? t : t - n; }

}  // namespace vexlp::detail
