// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "uqx/image.hpp"
#include "uqx/rng.hpp"

namespace uqx {

struct ChainConfig {
  double step_size = 0.0;  // delta; ignored by samplers without a step
  int n_burnin = 0;
  int n_samples = 1;
  int thinning = 1;

  void validate() const;
  long total_steps() const {
    return static_cast<long>(n_burnin) + static_cast<long>(n_samples) * thinning;
  }
};

using DriftFn = std::function<Image(const Image&)>;
using PotentialFn = std::function<double(const Image&)>;

/// Emitted samples plus streaming statistics from one sampler run.
struct ChainOutput {
  std::vector<Image> samples;
  /// U_y(x) = log p(y|x) + log p(x) up to an additive constant, one value
  /// per emitted sample; empty when the prior potential is not evaluable.
  std::vector<double> potentials;
  Image mean;
  Image second_moment;  // per-pixel mean of x^2
  double wall_ms = 0.0;
  long n_steps = 0;
  int prox_warning_count = 0;
  std::map<std::string, std::vector<double>> traces;  // e.g. Gibbs delta/gamma

  void finalize_moments();  // fills mean/second_moment from samples
};

/// Throws InvalidArgument if step > 1/lipschitz_bound (the stability guard
/// each Langevin sampler declares for its drift).
void require_stable_step(double step, double lipschitz_bound, const char* sampler);

/// x_{k+1} = x_k + delta * drift(x_k) + sqrt(2 delta) xi_k. Burn-in steps are
/// discarded, then every `thinning`-th iterate is emitted. `potential`, when
/// non-null, is evaluated on emitted samples only. Non-finite iterates throw
/// DivergedChain with the step index.
ChainOutput ula_chain(const DriftFn& drift, const PotentialFn* potential,
                      const Image& x0, const ChainConfig& cfg, RngStream rng);

}  // namespace uqx
