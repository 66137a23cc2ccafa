#pragma once

#include <complex>
#include <cstddef>
#include <vector>

// Thin FFTW wrappers. Plans are cached per length behind a mutex; transforms
// themselves run on caller threads.

namespace chsq::fft {

// Forward DFT of a real sequence; returns bins 0..n/2 (unnormalized).
std::vector<std::complex<double>> rfft(const std::vector<double>& x);

// Inverse of rfft: takes n/2+1 half-spectrum coefficients and the target
// length n, returns the real sequence scaled by 1/n (so irfft(rfft(x)) == x).
std::vector<double> irfft(const std::vector<std::complex<double>>& half, std::size_t n);

}  // namespace chsq::fft
