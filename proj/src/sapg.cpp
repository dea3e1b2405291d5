// SPDX-License-Identifier: Apache-2.0
#include "uqx/sapg.hpp"

#include <cmath>
#include <memory>

#include "uqx/errors.hpp"
#include "uqx/myula.hpp"

namespace uqx {

SapgResult sapg_chain(const GaussianLikelihood& lik,
                      const std::function<Image(const Image& v, double weight)>& prox_g,
                      const std::function<double(const Image&)>& g_value,
                      double homogeneity, double theta, double lambda_lo,
                      double lambda_hi, const Image& x0, const ChainConfig& cfg,
                      RngStream rng, const SapgOptions& opt) {
  cfg.validate();
  if (!(theta > 0.0)) throw InvalidArgument("sapg: theta must be positive");
  if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo))
    throw InvalidArgument("sapg: lambda bounds must satisfy 0 < lo < hi");
  require_stable_step(cfg.step_size, lik.lipschitz() + 1.0 / theta, "sapg");

  const double n = static_cast<double>(x0.size());
  const double c = opt.gamma_scale > 0.0 ? opt.gamma_scale : 10.0 / n;
  double lambda = opt.lambda_init > 0.0 ? opt.lambda_init
                                        : std::sqrt(lambda_lo * lambda_hi);
  lambda = std::min(std::max(lambda, lambda_lo), lambda_hi);

  const long n_adapt = cfg.total_steps();
  const double delta = cfg.step_size;
  const double noise_scale = std::sqrt(2.0 * delta);

  SapgResult res;
  res.lambda_trace.reserve(n_adapt);
  Image x = x0;
  RngStream adapt_rng = rng.child(0);
  for (long k = 1; k <= n_adapt; ++k) {
    // One MYULA step at the current lambda.
    Image g = lik.grad(x);
    const Image p = prox_g(x, theta * lambda);
    for (int i = 0; i < x.size(); ++i)
      g.pixels[i] += (p.pixels[i] - x.pixels[i]) / theta;
    for (int i = 0; i < x.size(); ++i)
      x.pixels[i] += delta * g.pixels[i] + noise_scale * adapt_rng.normal();
    for (double v : x.pixels)
      if (!std::isfinite(v))
        throw DivergedChain(k, "sapg: non-finite iterate at adaptation step " +
                                   std::to_string(k));

    const double gamma_k = c * std::pow(static_cast<double>(k), -opt.gamma_exponent);
    lambda += gamma_k * (n / (homogeneity * lambda) - g_value(x));
    lambda = std::min(std::max(lambda, lambda_lo), lambda_hi);
    res.lambda_trace.push_back(lambda);
  }

  // Tail average over the last fraction of the adaptation run.
  const auto window = std::max<long>(1, static_cast<long>(
                                            std::floor(opt.averaging_fraction * n_adapt)));
  double acc = 0.0;
  bool pinned_lo = true, pinned_hi = true;
  for (long k = n_adapt - window; k < n_adapt; ++k) {
    const double lv = res.lambda_trace[static_cast<std::size_t>(k)];
    acc += lv;
    pinned_lo = pinned_lo && lv <= lambda_lo * (1.0 + 1e-12);
    pinned_hi = pinned_hi && lv >= lambda_hi * (1.0 - 1e-12);
  }
  res.lambda_hat = acc / static_cast<double>(window);
  res.boundary_warning = pinned_lo || pinned_hi;

  // Final chain at the estimated weight.
  const double lambda_hat = res.lambda_hat;
  ProxStepFn prox_step = [&prox_g, lambda_hat](const Image& v, double th, int*) {
    return prox_g(v, th * lambda_hat);
  };
  PotentialFn potential = [&lik, &g_value, lambda_hat](const Image& xx) {
    return lik.log_density(xx) - lambda_hat * g_value(xx);
  };
  res.chain = myula_chain(lik, prox_step, theta, &potential, x, cfg, rng.child(1));
  return res;
}

SapgResult sapg_tv(const Image& y, const ObservationModel& m, double theta,
                   double lambda_lo, double lambda_hi, const ChainConfig& cfg,
                   RngStream rng, const SapgOptions& opt) {
  const GaussianLikelihood lik = GaussianLikelihood::make(y, m);

  // Unit-weight TV potential; the prox folds the running weight in. The dual
  // warm start persists across steps of the adaptation chain.
  auto warm = std::make_shared<TvDual>();
  auto prox_g = [warm](const Image& v, double weight) {
    TvPotential unit{1.0};
    TvProxResult r = unit.prox(v, weight, warm->empty() ? nullptr : warm.get());
    *warm = std::move(r.dual);
    return std::move(r.u);
  };
  auto g_value = [](const Image& x) { return TvPotential::tv(x); };
  return sapg_chain(lik, prox_g, g_value, 1.0, theta, lambda_lo, lambda_hi, y, cfg,
                    rng, opt);
}

}  // namespace uqx
