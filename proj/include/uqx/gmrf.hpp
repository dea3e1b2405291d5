// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uqx/fft.hpp"
#include "uqx/image.hpp"

namespace uqx {

/// Eigenvalues of the circulant 5-point Laplacian on an h x w torus:
/// 4 - 2cos(2 pi k1/h) - 2cos(2 pi k2/w), stored per Fourier mode.
Image laplacian_spectrum(int height, int width);

/// Stationary Gaussian Markov random field prior with circulant precision
/// delta * (L + dc_ridge * I); the ridge keeps the DC mode proper.
struct GmrfPrior {
  Image spectrum;          // eigenvalues of L, >= 0
  double delta = 1.0;      // precision scale
  double dc_ridge = 1e-5;  // spectral floor

  static GmrfPrior laplacian(int height, int width, double delta, double dc_ridge = 1e-5);

  void validate() const;  // all eigenvalues of (L + ridge I) positive
};

/// (delta/2) <x, (L + rI) x>, computed in the Fourier domain.
double gmrf_potential(const Image& x, const GmrfPrior& p);
/// delta * (L + rI) x.
Image gmrf_grad(const Image& x, const GmrfPrior& p);

}  // namespace uqx
