// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "uqx/image.hpp"

namespace uqx {

using cdouble = std::complex<double>;

/// Per-Fourier-mode array for an h x w grid, row-major, unnormalised DFT
/// convention: forward leaves sums unscaled, inverse divides by h*w.
using Spectrum = std::vector<cdouble>;

/// In-place 1-D DFT of arbitrary length (radix-2, Bluestein for the rest).
void fft_inplace(std::vector<cdouble>& a, bool inverse);

Spectrum fft2(const Image& x);
/// Inverse 2-D DFT; imaginary parts are discarded (inputs are expected to
/// be Hermitian-symmetric up to roundoff).
Image ifft2_real(const Spectrum& freq, int height, int width);

Spectrum fft2_complex(const Spectrum& freq_in, int height, int width, bool inverse);

}  // namespace uqx
