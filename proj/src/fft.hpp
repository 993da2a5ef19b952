#pragma once

#include <complex>
#include <cstddef>

namespace netstate::detail {

enum class FftDirection { forward, backward };

// Unnormalised in-place 1-D complex DFTs of length n over `count` vectors
// laid out with the given element stride and distance between vectors.
// forward uses exp(-2 pi i k u / n), backward exp(+2 pi i k u / n).
// Plans are cached per geometry; execution is thread-safe.
void fft_many(std::complex<double>* data, std::size_t n, std::size_t count, std::size_t stride,
              std::size_t dist, FftDirection dir);

// Real-input forward DFTs: n reals in, n / 2 + 1 complex bins out.
void rfft_many(const double* in, std::size_t in_stride, std::size_t in_dist, std::complex<double>* out,
               std::size_t out_stride, std::size_t out_dist, std::size_t n, std::size_t count);

// Inverse of rfft_many without the 1/n factor. Overwrites `in`.
void irfft_many(std::complex<double>* in, std::size_t in_stride, std::size_t in_dist, double* out,
                std::size_t out_stride, std::size_t out_dist, std::size_t n, std::size_t count);

}  // namespace netstate::detail
