// SPDX-License-Identifier: Apache-2.0
#include "uqx/pnp_ula.hpp"

#include "uqx/errors.hpp"

namespace uqx {

ChainOutput pnp_ula_with(const Image& y, const ObservationModel& m, Denoiser& denoiser,
                         double epsilon, double box_lo, double box_hi,
                         double lambda_proj, const ChainConfig& cfg, RngStream rng) {
  if (!(box_hi > box_lo)) throw InvalidArgument("pnp_ula: empty projection box");
  if (!(lambda_proj > 0.0)) throw InvalidArgument("pnp_ula: lambda_proj must be positive");
  if (!(epsilon > 0.0)) throw InvalidArgument("pnp_ula: epsilon must be positive");
  const GaussianLikelihood lik = GaussianLikelihood::make(y, m);
  require_stable_step(cfg.step_size, lik.lipschitz() + 1.0 / epsilon + 1.0 / lambda_proj,
                      "pnp_ula");

  DriftFn drift = [&](const Image& x) {
    Image g = lik.grad(x);
    const Image score = tweedie_score(x, denoiser, epsilon);
    for (int i = 0; i < x.size(); ++i) {
      const double v = x.pixels[i];
      const double clamped = v < box_lo ? box_lo : (v > box_hi ? box_hi : v);
      g.pixels[i] += score.pixels[i] + (clamped - v) / lambda_proj;
    }
    return g;
  };
  return ula_chain(drift, nullptr, y, cfg, rng);
}

ChainOutput pnp_ula(const Image& y, const ObservationModel& m, const DenoiserSpec& spec,
                    double box_lo, double box_hi, double lambda_proj,
                    const ChainConfig& cfg, RngStream rng) {
  auto denoiser = make_denoiser(spec);
  return pnp_ula_with(y, m, *denoiser, spec.epsilon, box_lo, box_hi, lambda_proj, cfg,
                      rng);
}

}  // namespace uqx
