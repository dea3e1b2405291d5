// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uqx/chain.hpp"
#include "uqx/model.hpp"
#include "uqx/tv.hpp"

namespace uqx {

/// prox of (theta * g) at v; implementations may use `warm` to carry solver
/// state between successive calls within one chain.
using ProxStepFn = std::function<Image(const Image& v, double theta, int* warning_count)>;

/// ULA on the Moreau-Yosida smoothed posterior: drift = grad log p(y|x)
/// + (prox(x, theta) - x) / theta. The stability guard uses
/// L = ||H||^2/sigma^2 + 1/theta.
ChainOutput myula_chain(const GaussianLikelihood& lik, const ProxStepFn& prox,
                        double theta, const PotentialFn* potential, const Image& x0,
                        const ChainConfig& cfg, RngStream rng);

/// MYULA targeting the TV-regularised posterior; potentials record the
/// unsmoothed U_y(x) = log p(y|x) - lambda TV(x). The TV prox dual variable
/// is warm-started across steps.
ChainOutput myula_tv_chain(const Image& y, const ObservationModel& m,
                           const TvPotential& tv, double theta, const ChainConfig& cfg,
                           RngStream rng);

}  // namespace uqx
