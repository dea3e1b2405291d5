// SPDX-License-Identifier: Apache-2.0
#include "uqx/oracle.hpp"

#include <chrono>
#include <cmath>

#include "uqx/errors.hpp"

namespace uqx {

ChainOutput exact_gaussian_sampler(const Image& y, const GaussianPrior& prior,
                                   const ObservationModel& m, const ChainConfig& cfg,
                                   RngStream rng) {
  cfg.validate();
  prior.validate();
  require_same_shape(y, prior.mean, "exact_gaussian_sampler");
  const auto t0 = std::chrono::steady_clock::now();

  const int h = y.height, w = y.width;
  const double n = static_cast<double>(y.size());
  const Spectrum transfer = m.transfer(h, w);
  const Spectrum y_hat = fft2(y);
  const Spectrum mu_hat = fft2(prior.mean);
  const double inv_noise_var = 1.0 / (m.noise_sigma * m.noise_sigma);

  // Posterior per mode: v_k = (|h_k|^2/sigma^2 + 1/s_k)^-1,
  // mean_k = v_k (conj(h_k) y_k / sigma^2 + mu_k / s_k).
  Spectrum mean_hat(y_hat.size());
  std::vector<double> noise_sd(y_hat.size());
  for (std::size_t i = 0; i < y_hat.size(); ++i) {
    const double s_k = prior.spectrum.pixels[i];
    const double v_k = 1.0 / (std::norm(transfer[i]) * inv_noise_var + 1.0 / s_k);
    mean_hat[i] =
        v_k * (std::conj(transfer[i]) * y_hat[i] * inv_noise_var + mu_hat[i] / s_k);
    noise_sd[i] = std::sqrt(v_k);
  }

  ChainOutput out;
  out.samples.reserve(cfg.n_samples);
  out.potentials.reserve(cfg.n_samples);
  Spectrum x_hat(y_hat.size());
  for (int s = 0; s < cfg.n_samples; ++s) {
    Image white = gaussian_image(h, w, rng);
    const Spectrum e_hat = fft2(white);
    double lik_ss = 0.0, prior_quad = 0.0;
    for (std::size_t i = 0; i < x_hat.size(); ++i) {
      x_hat[i] = mean_hat[i] + e_hat[i] * noise_sd[i];
      lik_ss += std::norm(y_hat[i] - transfer[i] * x_hat[i]);
      prior_quad += std::norm(x_hat[i] - mu_hat[i]) / prior.spectrum.pixels[i];
    }
    out.samples.push_back(ifft2_real(x_hat, h, w));
    out.potentials.push_back(-0.5 * inv_noise_var * lik_ss / n - 0.5 * prior_quad / n);
  }
  out.n_steps = cfg.n_samples;
  out.finalize_moments();
  out.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace uqx
