#pragma once

#include <complex>
#include <vector>

namespace fracgreen {

using cplx = std::complex<double>;

// Thin wrapper around FFTW (complex, in-place, 1d/2d). Plans are cached per
// (rank, n) under a mutex; execution on caller-owned buffers is thread-safe.
//
// forward  : v_k = sum_j v_j exp(-2*pi*i*j*k/N)   (per axis, unnormalized)
// backward : v_j = (1/N^rank) sum_k v_k exp(+2*pi*i*j*k/N)
void fft_forward(int rank, int n, std::vector<cplx>& v);
void fft_backward(int rank, int n, std::vector<cplx>& v);

// 1d transform along a strided line (used for per-line splits in 2d data).
void fft_forward_line(int n, cplx* data, int stride);
void fft_backward_line(int n, cplx* data, int stride);

}  // namespace fracgreen
