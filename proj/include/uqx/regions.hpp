// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uqx/chain.hpp"
#include "uqx/image.hpp"

namespace uqx {

enum class RegionKind { hpd, ball };

/// Highest-posterior-density region {x : U_y(x) >= gamma_alpha}; the
/// threshold and the evaluator share one chain's additive-constant
/// convention, and constants never cross chains.
struct HpdRegion {
  double gamma_alpha = 0.0;
  double alpha = 0.0;
  PotentialFn potential;  // empty when the model's potential is unavailable

  bool contains(const Image& candidate) const;
};

/// l2 ball centred on the posterior-mean estimate.
struct BallRegion {
  Image center;
  double radius = 0.0;
  double alpha = 0.0;

  bool contains(const Image& candidate) const;
};

/// Empirical alpha-quantile of the potentials under the lower order
/// statistic convention: index floor(alpha*N), clamped to >= 1 (1-based).
/// At least a (1-alpha) fraction of samples then satisfies U >= gamma.
double hpd_threshold(const std::vector<double>& potentials, double alpha);

HpdRegion hpd_from_chain(const std::vector<double>& potentials, double alpha,
                         PotentialFn potential);

/// Center = sample mean; radius = upper order statistic at index
/// ceil((1-alpha)*N) of the distances to the center.
BallRegion ball_from_chain(const std::vector<Image>& samples, double alpha);

}  // namespace uqx
