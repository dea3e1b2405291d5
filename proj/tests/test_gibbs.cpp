// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "uqx/gibbs.hpp"
#include "uqx/oracle.hpp"

using uqx::BlurKernel;
using uqx::ChainConfig;
using uqx::ChainOutput;
using uqx::GibbsHyperPriors;
using uqx::GibbsOptions;
using uqx::GmrfPrior;
using uqx::Image;
using uqx::ObservationModel;
using uqx::RngStream;

TEST_CASE("frozen hyperparameters reproduce the analytic Gaussian posterior") {
  const int side = 16;
  const double delta = 30.0, ridge = 1e-2, sigma = 0.05;
  GmrfPrior prior = GmrfPrior::laplacian(side, side, delta, ridge);
  ObservationModel m{BlurKernel::uniform(3), sigma};

  uqx::GaussianPrior gp;
  gp.mean = Image(side, side, 0.0);
  gp.spectrum = prior.spectrum;
  for (double& v : gp.spectrum.pixels) v = 1.0 / (delta * (v + ridge));
  RngStream rng(7);
  Image truth = gp.draw(rng);
  Image y = uqx::sample_observation(truth, m, rng);

  GibbsOptions opt;
  opt.sample_delta = false;
  opt.sample_gamma = false;
  ChainConfig cfg;
  cfg.n_samples = 6000;
  ChainOutput out = uqx::gibbs_gmrf(y, m, prior, GibbsHyperPriors{}, cfg, rng.child(1), opt);

  const uqx::AnalyticPosterior post = uqx::analytic_posterior(y, gp, m);
  CHECK(uqx::norm2(out.mean - post.mean) / uqx::norm2(post.mean) < 0.01);

  // Pixel-domain variance agrees with the analytic per-mode average.
  double sample_var = 0.0;
  for (int i = 0; i < out.mean.size(); ++i)
    sample_var += out.second_moment.pixels[i] - out.mean.pixels[i] * out.mean.pixels[i];
  sample_var /= out.mean.size();
  CHECK(sample_var == doctest::Approx(post.pixel_variance()).epsilon(0.05));

  // Frozen chains carry exact potentials consistent with an independent
  // evaluation of the same (likelihood + prior) statistic.
  REQUIRE(out.potentials.size() == out.samples.size());
  const double gamma0 = 1.0 / (sigma * sigma);
  const uqx::GaussianLikelihood lik = uqx::GaussianLikelihood::make(y, m);
  for (std::size_t i = 0; i < out.samples.size(); i += 500) {
    const double direct = gamma0 * sigma * sigma * lik.log_density(out.samples[i]) -
                          uqx::gmrf_potential(out.samples[i], prior);
    CHECK(out.potentials[i] == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("likelihood domination: identity model, tiny noise") {
  const int side = 8;
  Image y(side, side);
  oracle::lcg_fill(y, 13, 0.2, 0.8);
  ObservationModel m{BlurKernel::identity(), 1e-3};
  GmrfPrior prior = GmrfPrior::laplacian(side, side, 1.0, 1e-5);
  GibbsOptions opt;
  opt.sample_delta = false;
  opt.sample_gamma = false;
  ChainConfig cfg;
  cfg.n_samples = 500;
  ChainOutput out =
      uqx::gibbs_gmrf(y, m, prior, GibbsHyperPriors{}, cfg, RngStream(3), opt);
  CHECK(uqx::linf_diff(out.mean, y) < 0.005);
}

TEST_CASE("gamma step: empirical mean matches the conjugate formula") {
  const int side = 8;
  const double n = side * side;
  GmrfPrior prior = GmrfPrior::laplacian(side, side, 1.0, 1e-5);
  Image x(side, side);
  oracle::lcg_fill(x, 17);
  // <x, (L + rI) x> via the public potential (delta = 1).
  const double quad = 2.0 * uqx::gmrf_potential(x, prior);
  GibbsHyperPriors h;
  h.a_delta = 2.0;
  h.b_delta = 0.5;
  const double shape = h.a_delta + n / 2.0;
  const double rate = h.b_delta + quad / 2.0;

  RngStream rng(23);
  double acc = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) acc += rng.gamma(shape, rate);
  CHECK(acc / draws == doctest::Approx(shape / rate).epsilon(0.01));
}

TEST_CASE("hyperparameter traces are emitted and adapt") {
  const int side = 8;
  GmrfPrior prior = GmrfPrior::laplacian(side, side, 1.0, 1e-5);
  ObservationModel m{BlurKernel::uniform(3), 0.05};
  uqx::GaussianPrior gp = uqx::GaussianPrior::smooth_field(side, side, 0.05);
  RngStream rng(29);
  Image truth = gp.draw(rng);
  Image y = uqx::sample_observation(truth, m, rng);
  ChainConfig cfg;
  cfg.n_burnin = 200;
  cfg.n_samples = 300;
  ChainOutput out = uqx::gibbs_gmrf(y, m, prior, GibbsHyperPriors{}, cfg, rng.child(2));
  REQUIRE(out.traces.count("delta") == 1);
  REQUIRE(out.traces.count("gamma") == 1);
  CHECK(out.traces.at("delta").size() == out.samples.size());
  CHECK(out.traces.at("gamma").size() == out.samples.size());
  // The noise precision should wander near the true 1/sigma^2 = 400.
  double mean_gamma = 0.0;
  for (double g : out.traces.at("gamma")) mean_gamma += g;
  mean_gamma /= out.traces.at("gamma").size();
  CHECK(mean_gamma > 100.0);
  CHECK(mean_gamma < 1600.0);
  // Sampling hyperparameters means no well-defined potential.
  CHECK(out.potentials.empty());
}

TEST_CASE("deterministic given the stream") {
  const int side = 8;
  GmrfPrior prior = GmrfPrior::laplacian(side, side, 2.0, 1e-4);
  ObservationModel m{BlurKernel::uniform(3), 0.1};
  Image y(side, side, 0.5);
  ChainConfig cfg;
  cfg.n_samples = 40;
  ChainOutput a = uqx::gibbs_gmrf(y, m, prior, GibbsHyperPriors{}, cfg, RngStream(77));
  ChainOutput b = uqx::gibbs_gmrf(y, m, prior, GibbsHyperPriors{}, cfg, RngStream(77));
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK(uqx::linf_diff(a.samples[i], b.samples[i]) == 0.0);
  CHECK(a.traces.at("delta") == b.traces.at("delta"));
}
