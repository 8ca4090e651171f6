#pragma once

#include <complex>
#include <vector>

namespace ghost {

/// In-place unnormalized forward DFT (FFTW backend, plans cached per size).
void fft_forward(std::vector<std::complex<double>>& data);

/// In-place inverse DFT, normalized by 1/n so ifft(fft(x)) == x up to
/// floating-point roundoff.
void fft_inverse(std::vector<std::complex<double>>& data);

/// Angular frequency of FFT bin j for n samples at the given spacing,
/// in rad/m, mapped to the signed range (-pi/spacing, pi/spacing].
double fft_angular_frequency(int j, int n, double spacing);

} // namespace ghost
