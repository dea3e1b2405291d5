// SPDX-License-Identifier: Apache-2.0
#include "uqx/gibbs.hpp"

#include <chrono>
#include <cmath>

#include "uqx/errors.hpp"

namespace uqx {

void GibbsHyperPriors::validate() const {
  if (!(a_delta > 0.0 && b_delta > 0.0 && a_gamma > 0.0 && b_gamma > 0.0))
    throw InvalidArgument("GibbsHyperPriors: all shape/rate parameters must be positive");
}

ChainOutput gibbs_gmrf(const Image& y, const ObservationModel& m,
                       const GmrfPrior& prior, const GibbsHyperPriors& hyper,
                       const ChainConfig& cfg, RngStream rng, const GibbsOptions& opt) {
  cfg.validate();
  hyper.validate();
  prior.validate();
  require_same_shape(y, prior.spectrum, "gibbs_gmrf");
  m.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const int h = y.height, w = y.width;
  const double n = static_cast<double>(y.size());
  const Spectrum transfer = m.transfer(h, w);
  const Spectrum y_hat = fft2(y);

  double delta = opt.delta_init > 0.0 ? opt.delta_init : prior.delta;
  double gamma = opt.gamma_init > 0.0 ? opt.gamma_init
                                      : 1.0 / (m.noise_sigma * m.noise_sigma);
  const bool frozen = !opt.sample_delta && !opt.sample_gamma;

  ChainOutput out;
  out.samples.reserve(cfg.n_samples);
  auto& delta_trace = out.traces["delta"];
  auto& gamma_trace = out.traces["gamma"];

  Spectrum x_hat(y_hat.size());
  Image x(h, w);
  double lik_ss = 0.0;    // ||y - Hx||^2 of the current state
  double prior_quad = 0.0;  // <x, (L + rI) x>

  auto draw_x = [&]() {
    Image white = gaussian_image(h, w, rng);
    const Spectrum e_hat = fft2(white);
    lik_ss = 0.0;
    prior_quad = 0.0;
    for (std::size_t i = 0; i < x_hat.size(); ++i) {
      const double lpr = prior.spectrum.pixels[i] + prior.dc_ridge;
      const double prec = gamma * std::norm(transfer[i]) + delta * lpr;
      const cdouble mean = gamma * std::conj(transfer[i]) * y_hat[i] / prec;
      x_hat[i] = mean + e_hat[i] / std::sqrt(prec);
      lik_ss += std::norm(y_hat[i] - transfer[i] * x_hat[i]);
      prior_quad += lpr * std::norm(x_hat[i]);
    }
    lik_ss /= n;      // Parseval
    prior_quad /= n;
    x = ifft2_real(x_hat, h, w);
    for (double v : x.pixels)
      if (!std::isfinite(v)) throw DivergedChain(out.n_steps, "gibbs_gmrf: non-finite draw");
  };

  auto sweep = [&]() {
    draw_x();
    if (opt.sample_delta)
      delta = rng.gamma(hyper.a_delta + n / 2.0, hyper.b_delta + prior_quad / 2.0);
    if (opt.sample_gamma)
      gamma = rng.gamma(hyper.a_gamma + n / 2.0, hyper.b_gamma + lik_ss / 2.0);
    ++out.n_steps;
  };

  for (int k = 0; k < cfg.n_burnin; ++k) sweep();
  for (int s = 0; s < cfg.n_samples; ++s) {
    for (int t = 0; t < cfg.thinning; ++t) sweep();
    out.samples.push_back(x);
    delta_trace.push_back(delta);
    gamma_trace.push_back(gamma);
    if (frozen)
      out.potentials.push_back(-0.5 * gamma * lik_ss - 0.5 * delta * prior_quad);
  }
  out.finalize_moments();
  out.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace uqx
