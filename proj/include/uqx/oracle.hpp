// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "uqx/dataset.hpp"
#include "uqx/fft.hpp"
#include "uqx/image.hpp"
#include "uqx/model.hpp"
#include "uqx/regions.hpp"
#include "uqx/rng.hpp"

namespace uqx {

/// Gaussian prior with circulant covariance, stored as the per-Fourier-mode
/// variance spectrum. Plays the role of nature's prior in oracle runs.
struct GaussianPrior {
  Image mean;
  Image spectrum;  // covariance eigenvalues, all > 0

  void validate() const;

  static GaussianPrior iid(int height, int width, double var, double mean_value = 0.0);
  /// Smooth random fields: s_k = scale / (ridge + laplacian eigenvalue).
  static GaussianPrior smooth_field(int height, int width, double scale,
                                    double ridge = 0.1);
  /// Same shape with the covariance spectrum multiplied by `factor`.
  GaussianPrior scaled(double factor) const;

  Image draw(RngStream& rng) const;
  /// log density up to an additive constant: -(1/2) <x-mu, C^{-1} (x-mu)>.
  double log_density_unnorm(const Image& x) const;
};

/// Conjugate posterior of (GaussianPrior, ObservationModel) given y,
/// diagonal in the Fourier domain.
struct AnalyticPosterior {
  Image mean;
  Image variance_spectrum;  // v_k per mode

  /// Pixel-domain marginal variance (equal across pixels by stationarity).
  double pixel_variance() const;
};

AnalyticPosterior analytic_posterior(const Image& y, const GaussianPrior& prior,
                                     const ObservationModel& m);

/// i.i.d. exact draws from the conjugate posterior, sampled mode-wise;
/// potentials are exact up to one chain-wide additive constant. Burn-in and
/// thinning are meaningless for i.i.d. draws and are ignored.
ChainOutput exact_gaussian_sampler(const Image& y, const GaussianPrior& prior,
                                   const ObservationModel& m, const ChainConfig& cfg,
                                   RngStream rng);

/// Synthetic "nature" dataset of i.i.d. prior draws (D22).
Dataset make_gaussian_dataset(const GaussianPrior& prior, int count, std::uint64_t seed);

/// Monte Carlo ground truth for the audit: draws (x*, y) from the TRUE
/// joint, builds a region from `n_region_samples` exact draws of the
/// ASSUMED posterior, and averages membership of x*.
double brute_coverage(const GaussianPrior& true_prior, const GaussianPrior& assumed_prior,
                      const ObservationModel& m, double alpha, RegionKind kind,
                      int n_outer, int n_region_samples, std::uint64_t seed,
                      int threads = 0);

}  // namespace uqx
