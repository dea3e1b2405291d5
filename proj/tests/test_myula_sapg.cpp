// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "uqx/errors.hpp"
#include "uqx/myula.hpp"
#include "uqx/oracle.hpp"
#include "uqx/sapg.hpp"

using uqx::BlurKernel;
using uqx::ChainConfig;
using uqx::ChainOutput;
using uqx::GaussianLikelihood;
using uqx::Image;
using uqx::ObservationModel;
using uqx::RngStream;
using uqx::TvPotential;

TEST_CASE("vanishing TV weight reduces to the flat-prior Gaussian posterior") {
  const int n = 8;
  Image truth(n, n);
  oracle::lcg_fill(truth, 3, 0.2, 0.8);
  ObservationModel m{BlurKernel::identity(), 0.5};
  RngStream rng(11);
  Image y = uqx::sample_observation(truth, m, rng);

  TvPotential tv{1e-8};
  const double theta = 1.0;
  ChainConfig cfg;
  cfg.step_size = 1.0 / (1.0 / (0.5 * 0.5) + 1.0 / theta);
  cfg.n_burnin = 2000;
  cfg.n_samples = 30000;
  ChainOutput out = uqx::myula_tv_chain(y, m, tv, theta, cfg, rng.child(1));

  // Flat prior with identity H: posterior is N(y, sigma^2 I).
  CHECK(uqx::norm2(out.mean - y) / uqx::norm2(y) < 0.02);
}

TEST_CASE("quadratic prox stand-in matches ULA on the smoothed Gaussian target") {
  const int n = 8;
  Image truth(n, n, 0.4);
  ObservationModel m{BlurKernel::identity(), 0.5};
  RngStream rng(21);
  Image y = uqx::sample_observation(truth, m, rng);
  const GaussianLikelihood lik = GaussianLikelihood::make(y, m);

  const double q = 2.0, theta = 0.5;
  const double q_smooth = q / (1.0 + theta * q);  // Moreau envelope curvature
  ChainConfig cfg;
  cfg.step_size = 1.0 / (lik.lipschitz() + 1.0 / theta);
  cfg.n_burnin = 2000;
  cfg.n_samples = 40000;

  uqx::ProxStepFn quad_prox = [q](const Image& v, double th, int*) {
    return (1.0 / (1.0 + th * q)) * v;
  };
  ChainOutput myula = uqx::myula_chain(lik, quad_prox, theta, nullptr, y, cfg,
                                       RngStream(1001));

  uqx::DriftFn drift = [&lik, q_smooth](const Image& x) {
    Image g = lik.grad(x);
    uqx::axpy(g, -q_smooth, x);
    return g;
  };
  ChainOutput ula = uqx::ula_chain(drift, nullptr, y, cfg, RngStream(2002));

  CHECK(uqx::norm2(myula.mean - ula.mean) / uqx::norm2(ula.mean) < 0.02);
  // Pixel-averaged variances agree too.
  auto avg_var = [](const ChainOutput& c) {
    double v = 0.0;
    for (int i = 0; i < c.mean.size(); ++i)
      v += c.second_moment.pixels[i] - c.mean.pixels[i] * c.mean.pixels[i];
    return v / c.mean.size();
  };
  CHECK(avg_var(myula) == doctest::Approx(avg_var(ula)).epsilon(0.02));
}

TEST_CASE("myula records unsmoothed potentials and a consistent evaluator") {
  Image truth(6, 6, 0.5);
  ObservationModel m{BlurKernel::uniform(3), 0.2};
  RngStream rng(31);
  Image y = uqx::sample_observation(truth, m, rng);
  TvPotential tv{2.0};
  ChainConfig cfg;
  cfg.step_size = 0.5 / (1.0 / (0.2 * 0.2) + 1.0 / 0.1);
  cfg.n_samples = 50;
  ChainOutput out = uqx::myula_tv_chain(y, m, tv, 0.1, cfg, rng.child(7));
  REQUIRE(out.potentials.size() == out.samples.size());
  const GaussianLikelihood lik = GaussianLikelihood::make(y, m);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double direct = lik.log_density(out.samples[i]) - tv.value(out.samples[i]);
    CHECK(out.potentials[i] == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("deblurring improves over the observation at small noise") {
  const int side = 16;
  uqx::GaussianPrior prior = uqx::GaussianPrior::smooth_field(side, side, 0.4);
  RngStream root(77);
  int improved = 0;
  const int cases = 3;
  for (int i = 0; i < cases; ++i) {
    RngStream rng = root.child(i);
    Image truth = prior.draw(rng);
    ObservationModel m{BlurKernel::uniform(3), 0.01};
    Image y = uqx::sample_observation(truth, m, rng);
    TvPotential tv{2.0};
    const double theta = 0.05;
    ChainConfig cfg;
    cfg.step_size = 0.5 / (1.0 / (0.01 * 0.01) + 1.0 / theta);
    cfg.n_burnin = 300;
    cfg.n_samples = 1200;
    ChainOutput out = uqx::myula_tv_chain(y, m, tv, theta, cfg, rng.child(9));
    if (uqx::psnr(truth, out.mean) > uqx::psnr(truth, y)) ++improved;
  }
  CHECK(improved == cases);
}

TEST_CASE("myula rejects unstable steps") {
  Image y(4, 4, 0.5);
  ObservationModel m{BlurKernel::identity(), 0.1};
  TvPotential tv{1.0};
  ChainConfig cfg;
  cfg.step_size = 1.0;  // far beyond 1/(1/sigma^2 + 1/theta)
  cfg.n_samples = 10;
  CHECK_THROWS_AS(uqx::myula_tv_chain(y, m, tv, 0.5, cfg, RngStream(1)),
                  uqx::InvalidArgument);
}

TEST_CASE("non-converging prox calls are counted as warnings") {
  // Weight 0.2 on a random 16x16 input needs more than the 200-iteration
  // cap; the chain keeps running and bumps the warning counter.
  Image y(16, 16);
  oracle::lcg_fill(y, 56);
  ObservationModel m{BlurKernel::identity(), 0.5};
  TvPotential tv{1.0};
  const double theta = 0.2;
  ChainConfig cfg;
  cfg.step_size = 0.5 / (1.0 / 0.25 + 1.0 / theta);
  cfg.n_samples = 3;
  ChainOutput out = uqx::myula_tv_chain(y, m, tv, theta, cfg, RngStream(2));
  CHECK(out.prox_warning_count > 0);
  CHECK(out.samples.size() == 3);
}

namespace {

// SAPG on the quadratic potential g = ||x||^2/2 (2-homogeneous): the
// marginal-likelihood maximiser has the closed form
// 1 / max(||y||^2/n - sigma^2, floor).
struct QuadSapg {
  // theta must stay small: the Moreau envelope flattens the prior curvature
  // by 1/(1 + theta*lambda), which biases the recovered weight.
  uqx::SapgResult run(const Image& y, double sigma, double lo, double hi,
                      std::uint64_t seed, double theta = 0.01) const {
    ObservationModel m{BlurKernel::identity(), sigma};
    const GaussianLikelihood lik = GaussianLikelihood::make(y, m);
    auto prox = [](const Image& v, double weight) { return (1.0 / (1.0 + weight)) * v; };
    auto g = [](const Image& x) { return uqx::norm2sq(x) / 2.0; };
    ChainConfig cfg;
    cfg.step_size = 0.5 / (lik.lipschitz() + 1.0 / theta);
    cfg.n_burnin = 4000;
    cfg.n_samples = 20000;
    return uqx::sapg_chain(lik, prox, g, 2.0, theta, lo, hi, y, cfg, RngStream(seed));
  }
};

}  // namespace

TEST_CASE("sapg recovers the closed-form Gaussian evidence maximiser") {
  const int side = 16;
  const double lambda_star = 2.0, sigma = 0.5;
  uqx::GaussianPrior prior = uqx::GaussianPrior::iid(side, side, 1.0 / lambda_star);
  RngStream rng(41);
  Image x = prior.draw(rng);
  ObservationModel m{BlurKernel::identity(), sigma};
  Image y = uqx::sample_observation(x, m, rng);

  const double n = static_cast<double>(y.size());
  const double evidence_var = std::max(uqx::norm2sq(y) / n - sigma * sigma, 1e-6);
  const double lambda_ml = 1.0 / evidence_var;

  auto res = QuadSapg{}.run(y, sigma, 1e-3, 1e3, 51);
  CHECK(std::abs(res.lambda_hat - lambda_ml) / lambda_ml < 0.10);
  CHECK_FALSE(res.boundary_warning);
}

TEST_CASE("sapg pins to the nearer bound and warns when the optimum is outside") {
  uqx::GaussianPrior prior = uqx::GaussianPrior::iid(16, 16, 0.5);  // lambda* = 2
  RngStream rng(42);
  Image x = prior.draw(rng);
  ObservationModel m{BlurKernel::identity(), 0.5};
  Image y = uqx::sample_observation(x, m, rng);
  auto res = QuadSapg{}.run(y, 0.5, 5.0, 10.0, 52);
  CHECK(res.lambda_hat == doctest::Approx(5.0));
  CHECK(res.boundary_warning);
}

TEST_CASE("sapg estimates are stable across seeds") {
  uqx::GaussianPrior prior = uqx::GaussianPrior::iid(16, 16, 0.5);
  RngStream rng(43);
  Image x = prior.draw(rng);
  ObservationModel m{BlurKernel::identity(), 0.5};
  Image y = uqx::sample_observation(x, m, rng);
  auto a = QuadSapg{}.run(y, 0.5, 1e-3, 1e3, 61);
  auto b = QuadSapg{}.run(y, 0.5, 1e-3, 1e3, 62);
  CHECK(std::abs(a.lambda_hat - b.lambda_hat) / a.lambda_hat < 0.05);
}

TEST_CASE("sapg validates bounds") {
  Image y(4, 4, 0.5);
  CHECK_THROWS_AS(QuadSapg{}.run(y, 0.5, 2.0, 1.0, 1), uqx::InvalidArgument);
}
