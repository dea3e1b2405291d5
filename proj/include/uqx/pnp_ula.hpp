// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uqx/chain.hpp"
#include "uqx/denoiser.hpp"
#include "uqx/model.hpp"

namespace uqx {

/// Plug-and-play ULA: drift = grad log p(y|x) + (D_eps(x) - x)/eps
/// + (Pi_C(x) - x)/lambda_proj with Pi_C the pixel-wise clamp to
/// [box_lo, box_hi]. No potentials are emitted (the prior potential is not
/// evaluable), so credible regions for this sampler are l2 balls.
ChainOutput pnp_ula(const Image& y, const ObservationModel& m,
                    const DenoiserSpec& spec, double box_lo, double box_hi,
                    double lambda_proj, const ChainConfig& cfg, RngStream rng);

/// Variant with an externally constructed denoiser (shared across trials).
ChainOutput pnp_ula_with(const Image& y, const ObservationModel& m, Denoiser& denoiser,
                         double epsilon, double box_lo, double box_hi,
                         double lambda_proj, const ChainConfig& cfg, RngStream rng);

}  // namespace uqx
