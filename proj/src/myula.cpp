// SPDX-License-Identifier: Apache-2.0
#include "uqx/myula.hpp"

#include <memory>

#include "uqx/errors.hpp"

namespace uqx {

ChainOutput myula_chain(const GaussianLikelihood& lik, const ProxStepFn& prox,
                        double theta, const PotentialFn* potential, const Image& x0,
                        const ChainConfig& cfg, RngStream rng) {
  if (!(theta > 0.0)) throw InvalidArgument("myula_chain: theta must be positive");
  require_stable_step(cfg.step_size, lik.lipschitz() + 1.0 / theta, "myula_chain");

  auto warnings = std::make_shared<int>(0);
  DriftFn drift = [&lik, &prox, theta, warnings](const Image& x) {
    Image g = lik.grad(x);
    const Image p = prox(x, theta, warnings.get());
    for (int i = 0; i < x.size(); ++i)
      g.pixels[i] += (p.pixels[i] - x.pixels[i]) / theta;
    return g;
  };
  ChainOutput out = ula_chain(drift, potential, x0, cfg, rng);
  out.prox_warning_count = *warnings;
  return out;
}

ChainOutput myula_tv_chain(const Image& y, const ObservationModel& m,
                           const TvPotential& tv, double theta, const ChainConfig& cfg,
                           RngStream rng) {
  tv.validate();
  const GaussianLikelihood lik = GaussianLikelihood::make(y, m);

  auto warm = std::make_shared<TvDual>();
  ProxStepFn prox = [&tv, warm](const Image& v, double th, int* warning_count) {
    TvProxResult res = tv.prox(v, th, warm->empty() ? nullptr : warm.get());
    if (!res.converged && warning_count) ++(*warning_count);
    *warm = std::move(res.dual);
    return std::move(res.u);
  };
  PotentialFn potential = [&lik, &tv](const Image& x) {
    return lik.log_density(x) - tv.value(x);
  };
  return myula_chain(lik, prox, theta, &potential, y, cfg, rng);
}

}  // namespace uqx
