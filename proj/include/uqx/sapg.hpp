// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uqx/chain.hpp"
#include "uqx/model.hpp"
#include "uqx/tv.hpp"

namespace uqx {

/// Maximum-marginal-likelihood estimation of the regularisation weight by
/// stochastic approximation interleaved with MYULA steps.
struct SapgResult {
  double lambda_hat = 0.0;
  ChainOutput chain;  // final run at lambda_hat
  std::vector<double> lambda_trace;
  bool boundary_warning = false;
};

struct SapgOptions {
  double gamma_scale = -1.0;          // c in gamma_k = c k^{-0.8}; default 10/n
  double gamma_exponent = 0.8;
  double averaging_fraction = 0.25;   // tail fraction averaged into lambda_hat
  double lambda_init = -1.0;          // default geometric mid of the bounds
};

/// Generic engine for a k-homogeneous prior potential g:
/// lambda_{k+1} = Proj[lo,hi](lambda_k + gamma_k (n/(hom*lambda_k) - g(x_k))),
/// one MYULA step per update, then a final chain at the tail-averaged value.
/// `prox_g` must return prox of (weight * g) at v.
SapgResult sapg_chain(const GaussianLikelihood& lik,
                      const std::function<Image(const Image& v, double weight)>& prox_g,
                      const std::function<double(const Image&)>& g_value,
                      double homogeneity, double theta, double lambda_lo,
                      double lambda_hi, const Image& x0, const ChainConfig& cfg,
                      RngStream rng, const SapgOptions& opt = {});

/// TV specialisation; the returned chain records unsmoothed potentials
/// log p(y|x) - lambda_hat TV(x).
SapgResult sapg_tv(const Image& y, const ObservationModel& m, double theta,
                   double lambda_lo, double lambda_hi, const ChainConfig& cfg,
                   RngStream rng, const SapgOptions& opt = {});

}  // namespace uqx
