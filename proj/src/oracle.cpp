// SPDX-License-Identifier: Apache-2.0
#include "uqx/oracle.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "uqx/errors.hpp"
#include "uqx/gmrf.hpp"
#include "uqx/parallel.hpp"

namespace uqx {

void GaussianPrior::validate() const {
  require_same_shape(mean, spectrum, "GaussianPrior");
  for (double v : spectrum.pixels)
    if (!(v > 0.0)) throw InvalidArgument("GaussianPrior: mode variances must be positive");
}

GaussianPrior GaussianPrior::iid(int height, int width, double var, double mean_value) {
  if (!(var > 0.0)) throw InvalidArgument("GaussianPrior::iid: var must be positive");
  GaussianPrior p;
  p.mean = Image(height, width, mean_value);
  p.spectrum = Image(height, width, var);
  return p;
}

GaussianPrior GaussianPrior::smooth_field(int height, int width, double scale,
                                          double ridge) {
  if (!(scale > 0.0) || !(ridge > 0.0))
    throw InvalidArgument("GaussianPrior::smooth_field: scale and ridge must be positive");
  GaussianPrior p;
  p.mean = Image(height, width, 0.0);
  p.spectrum = laplacian_spectrum(height, width);
  for (double& v : p.spectrum.pixels) v = scale / (ridge + v);
  return p;
}

GaussianPrior GaussianPrior::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("GaussianPrior::scaled: factor must be positive");
  GaussianPrior p = *this;
  for (double& v : p.spectrum.pixels) v *= factor;
  return p;
}

Image GaussianPrior::draw(RngStream& rng) const {
  validate();
  Image white = gaussian_image(mean.height, mean.width, rng);
  Spectrum e_hat = fft2(white);
  for (std::size_t i = 0; i < e_hat.size(); ++i)
    e_hat[i] *= std::sqrt(spectrum.pixels[i]);
  Image coloured = ifft2_real(e_hat, mean.height, mean.width);
  axpy(coloured, 1.0, mean);
  return coloured;
}

double GaussianPrior::log_density_unnorm(const Image& x) const {
  require_same_shape(x, mean, "GaussianPrior::log_density_unnorm");
  const Spectrum xf = fft2(x - mean);
  double quad = 0.0;
  for (std::size_t i = 0; i < xf.size(); ++i) quad += std::norm(xf[i]) / spectrum.pixels[i];
  quad /= x.size();
  return -0.5 * quad;
}

double AnalyticPosterior::pixel_variance() const {
  double s = 0.0;
  for (double v : variance_spectrum.pixels) s += v;
  return s / variance_spectrum.size();
}

AnalyticPosterior analytic_posterior(const Image& y, const GaussianPrior& prior,
                                     const ObservationModel& m) {
  prior.validate();
  require_same_shape(y, prior.mean, "analytic_posterior");
  const Spectrum transfer = m.transfer(y.height, y.width);
  const Spectrum y_hat = fft2(y);
  const Spectrum mu_hat = fft2(prior.mean);
  const double inv_noise_var = 1.0 / (m.noise_sigma * m.noise_sigma);

  AnalyticPosterior post;
  post.variance_spectrum = Image(y.height, y.width);
  Spectrum mean_hat(y_hat.size());
  for (std::size_t i = 0; i < y_hat.size(); ++i) {
    const double s_k = prior.spectrum.pixels[i];
    const double v_k = 1.0 / (std::norm(transfer[i]) * inv_noise_var + 1.0 / s_k);
    post.variance_spectrum.pixels[i] = v_k;
    mean_hat[i] =
        v_k * (std::conj(transfer[i]) * y_hat[i] * inv_noise_var + mu_hat[i] / s_k);
  }
  post.mean = ifft2_real(mean_hat, y.height, y.width);
  return post;
}

Dataset make_gaussian_dataset(const GaussianPrior& prior, int count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("make_gaussian_dataset: count must be >= 1");
  Dataset ds;
  RngStream root(seed);
  ds.items.reserve(count);
  for (int i = 0; i < count; ++i) {
    RngStream sub = root.child(static_cast<std::uint64_t>(i));
    ds.items.push_back(prior.draw(sub));
    ds.labels.push_back("synthetic-" + std::to_string(i));
  }
  return ds;
}

double brute_coverage(const GaussianPrior& true_prior, const GaussianPrior& assumed_prior,
                      const ObservationModel& m, double alpha, RegionKind kind,
                      int n_outer, int n_region_samples, std::uint64_t seed,
                      int threads) {
  if (n_outer < 1) throw InvalidArgument("brute_coverage: n_outer must be >= 1");
  if (n_region_samples < 2)
    throw InvalidArgument("brute_coverage: n_region_samples must be >= 2");
  true_prior.validate();
  assumed_prior.validate();

  RngStream root(seed);
  std::atomic<long> hits{0};
  ChainConfig cfg;
  cfg.n_samples = n_region_samples;

  parallel_for(n_outer, threads, [&](long i) {
    RngStream trial = root.child(static_cast<std::uint64_t>(i));
    RngStream draw_rng = trial.child(0);
    const Image x_star = true_prior.draw(draw_rng);
    RngStream noise_rng = trial.child(1);
    const Image y = sample_observation(x_star, m, noise_rng);
    ChainOutput chain = exact_gaussian_sampler(y, assumed_prior, m, cfg, trial.child(2));
    bool member = false;
    if (kind == RegionKind::ball) {
      member = ball_from_chain(chain.samples, alpha).contains(x_star);
    } else {
      const GaussianLikelihood lik = GaussianLikelihood::make(y, m);
      PotentialFn u = [&lik, &assumed_prior](const Image& x) {
        return lik.log_density(x) + assumed_prior.log_density_unnorm(x);
      };
      member = hpd_from_chain(chain.potentials, alpha, u).contains(x_star);
    }
    if (member) hits.fetch_add(1);
  });
  return static_cast<double>(hits.load()) / static_cast<double>(n_outer);
}

}  // namespace uqx
