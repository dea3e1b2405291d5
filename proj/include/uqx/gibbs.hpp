// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uqx/chain.hpp"
#include "uqx/gmrf.hpp"
#include "uqx/model.hpp"

namespace uqx {

/// Shape/rate pairs of the gamma conjugate hyperpriors on the prior
/// precision (delta) and the noise precision (gamma). Defaults are weakly
/// informative so the scales genuinely adapt to the data.
struct GibbsHyperPriors {
  double a_delta = 1e-3;
  double b_delta = 1e-3;
  double a_gamma = 1e-3;
  double b_gamma = 1e-3;

  void validate() const;
};

struct GibbsOptions {
  bool sample_delta = true;
  bool sample_gamma = true;
  double delta_init = -1.0;  // default: prior.delta
  double gamma_init = -1.0;  // default: 1/sigma^2
};

/// Hierarchical Gibbs sampler for the GMRF deconvolution model, cycling
/// (x | delta, gamma, y), (delta | x), (gamma | x, y); the x-conditional is
/// sampled mode-wise in the Fourier domain. Hyperparameter draws are traced
/// under "delta" and "gamma". Potentials are emitted only when both
/// hyperparameters are frozen (they are model constants in that case).
ChainOutput gibbs_gmrf(const Image& y, const ObservationModel& m,
                       const GmrfPrior& prior, const GibbsHyperPriors& hyper,
                       const ChainConfig& cfg, RngStream rng,
                       const GibbsOptions& opt = {});

}  // namespace uqx
