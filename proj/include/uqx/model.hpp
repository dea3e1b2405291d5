// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uqx/fft.hpp"
#include "uqx/image.hpp"
#include "uqx/rng.hpp"

namespace uqx {

/// Odd-sized convolution kernel, anchor at the centre tap.
struct BlurKernel {
  int height = 1;
  int width = 1;
  std::vector<double> taps{1.0};

  double at(int r, int c) const { return taps[static_cast<std::size_t>(r) * width + c]; }

  /// size x size moving average, taps sum to 1 exactly.
  static BlurKernel uniform(int size);
  static BlurKernel identity();

  void validate() const;  // odd sides, finite taps
};

/// Linear-Gaussian observation model y = Hx + w with circular boundary,
/// so H is diagonalised by the 2-D DFT.
struct ObservationModel {
  BlurKernel kernel;
  double noise_sigma = 0.0;

  void validate() const;  // noise_sigma > 0

  /// Per-mode transfer coefficients of H on an h x w grid.
  Spectrum transfer(int height, int width) const;
};

/// Circular convolution of x with k, computed in the Fourier domain.
Image convolve_circular(const Image& x, const BlurKernel& k);

/// Adjoint H^T applied via the conjugate transfer spectrum.
Image apply_transfer(const Spectrum& transfer, const Image& x, bool adjoint = false);

/// Noise level sigma with sigma^2 = Var(blurred) * 10^(-bsnr_db/10); Var is
/// the empirical per-pixel variance of the blurred image.
double sigma_from_bsnr(const Image& blurred, double bsnr_db);

/// Draws y = Hx + w, w iid N(0, sigma^2); deterministic given the stream.
Image sample_observation(const Image& x, const ObservationModel& m, RngStream& rng);

/// 10*log10(peak^2/MSE) with peak = 1.0, capped at 200 dB.
double psnr(const Image& reference, const Image& estimate);

/// White standard-normal image drawn row-major from the stream.
Image gaussian_image(int height, int width, RngStream& rng);

/// Precomputed Gaussian likelihood pieces for one observation, shared by the
/// Langevin samplers and the potential evaluators.
struct GaussianLikelihood {
  Spectrum transfer;
  Spectrum y_hat;
  double sigma = 0.0;
  int height = 0;
  int width = 0;

  static GaussianLikelihood make(const Image& y, const ObservationModel& m);

  /// H^T (y - Hx) / sigma^2
  Image grad(const Image& x) const;
  /// -||y - Hx||^2 / (2 sigma^2)
  double log_density(const Image& x) const;
  /// Lipschitz constant of grad: max_k |h_k|^2 / sigma^2.
  double lipschitz() const;
};

}  // namespace uqx
