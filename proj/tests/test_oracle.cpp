// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "support/oracles.hpp"
#include "uqx/oracle.hpp"
#include "uqx/stats.hpp"

using uqx::BlurKernel;
using uqx::GaussianPrior;
using uqx::Image;
using uqx::ObservationModel;
using uqx::RngStream;

namespace {

// Dense covariance application C x = IDFT(diag(s) DFT(x)) via the quadratic
// brute-force DFT (independent of the library FFT).
std::vector<double> apply_circulant_dense(const Image& spectrum,
                                          const std::vector<double>& x, int h, int w) {
  using cd = std::complex<double>;
  const int n = h * w;
  std::vector<cd> freq(n);
  // 2-D brute DFT, rows then columns.
  std::vector<cd> tmp(x.begin(), x.end());
  for (int r = 0; r < h; ++r) {
    std::vector<cd> row(tmp.begin() + r * w, tmp.begin() + (r + 1) * w);
    row = oracle::dft_brute(row, false);
    for (int c = 0; c < w; ++c) freq[r * w + c] = row[c];
  }
  for (int c = 0; c < w; ++c) {
    std::vector<cd> col(h);
    for (int r = 0; r < h; ++r) col[r] = freq[r * w + c];
    col = oracle::dft_brute(col, false);
    for (int r = 0; r < h; ++r) freq[r * w + c] = col[r];
  }
  for (int i = 0; i < n; ++i) freq[i] *= spectrum.pixels[i];
  for (int c = 0; c < w; ++c) {
    std::vector<cd> col(h);
    for (int r = 0; r < h; ++r) col[r] = freq[r * w + c];
    col = oracle::dft_brute(col, true);
    for (int r = 0; r < h; ++r) freq[r * w + c] = col[r];
  }
  std::vector<double> out(n);
  for (int r = 0; r < h; ++r) {
    std::vector<cd> row(freq.begin() + r * w, freq.begin() + (r + 1) * w);
    row = oracle::dft_brute(row, true);
    for (int c = 0; c < w; ++c) out[r * w + c] = row[c].real();
  }
  return out;
}

}  // namespace

TEST_CASE("analytic posterior: scalar conjugacy for identity H") {
  const int side = 6;
  const double s2 = 0.09, sigma = 0.3;
  GaussianPrior prior = GaussianPrior::iid(side, side, s2);
  Image y(side, side);
  oracle::lcg_fill(y, 5, -1.0, 1.0);
  ObservationModel m{BlurKernel::identity(), sigma};
  const auto post = uqx::analytic_posterior(y, prior, m);
  const double shrink = s2 / (s2 + sigma * sigma);
  Image want = shrink * y;
  CHECK(uqx::linf_diff(post.mean, want) < 1e-10);
}

TEST_CASE("analytic posterior equals the dense-matrix solution on 4x4") {
  const int h = 4, w = 4, n = 16;
  GaussianPrior prior = GaussianPrior::smooth_field(h, w, 0.4, 0.2);
  ObservationModel m{BlurKernel::uniform(3), 0.25};
  Image y(h, w);
  oracle::lcg_fill(y, 77, -0.5, 1.5);

  // Dense H from impulse responses (brute-force spatial convolution).
  std::vector<double> H(n * n, 0.0);
  for (int j = 0; j < n; ++j) {
    Image e(h, w, 0.0);
    e.pixels[j] = 1.0;
    Image he = oracle::conv_spatial_brute(e, m.kernel);
    for (int i = 0; i < n; ++i) H[i * n + j] = he.pixels[i];
  }
  // Dense covariance and its inverse action via the dense solver.
  std::vector<double> C(n * n, 0.0);
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    const auto col = apply_circulant_dense(prior.spectrum, e, h, w);
    for (int i = 0; i < n; ++i) C[i * n + j] = col[i];
  }
  // Posterior precision A = H^T H / sigma^2 + C^{-1}; solve A mean = H^T y / sigma^2.
  // Build C^{-1} column by column.
  std::vector<double> Cinv(n * n, 0.0);
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    const auto col = oracle::solve_dense(C, e);
    for (int i = 0; i < n; ++i) Cinv[i * n + j] = col[i];
  }
  const double inv_var = 1.0 / (m.noise_sigma * m.noise_sigma);
  std::vector<double> A(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double hth = 0.0;
      for (int k = 0; k < n; ++k) hth += H[k * n + i] * H[k * n + j];
      A[i * n + j] = hth * inv_var + Cinv[i * n + j];
    }
  std::vector<double> rhs(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double hty = 0.0;
    for (int k = 0; k < n; ++k) hty += H[k * n + i] * y.pixels[k];
    rhs[i] = hty * inv_var;
  }
  const auto dense_mean = oracle::solve_dense(A, rhs);

  const auto post = uqx::analytic_posterior(y, prior, m);
  for (int i = 0; i < n; ++i)
    CHECK(post.mean.pixels[i] == doctest::Approx(dense_mean[i]).epsilon(1e-10));
}

TEST_CASE("uninformative data returns the prior") {
  const int side = 6;
  GaussianPrior prior = GaussianPrior::smooth_field(side, side, 0.7);
  for (double& v : prior.mean.pixels) v = 0.3;
  Image y(side, side, 0.9);
  ObservationModel m{BlurKernel::uniform(3), 1e7};
  const auto post = uqx::analytic_posterior(y, prior, m);
  CHECK(uqx::linf_diff(post.mean, prior.mean) < 1e-8);
  for (int k = 0; k < post.variance_spectrum.size(); ++k)
    CHECK(post.variance_spectrum.pixels[k] ==
          doctest::Approx(prior.spectrum.pixels[k]).epsilon(1e-8));
}

TEST_CASE("prior draws have the declared covariance structure") {
  const int side = 8;
  GaussianPrior prior = GaussianPrior::iid(side, side, 0.49, 0.25);
  RngStream rng(31);
  const int draws = 20000;
  double mean_acc = 0.0, var_acc = 0.0;
  for (int i = 0; i < draws; ++i) {
    Image x = prior.draw(rng);
    for (double v : x.pixels) {
      mean_acc += v;
      var_acc += (v - 0.25) * (v - 0.25);
    }
  }
  const double count = static_cast<double>(draws) * side * side;
  CHECK(mean_acc / count == doctest::Approx(0.25).epsilon(0.02));
  CHECK(var_acc / count == doctest::Approx(0.49).epsilon(0.02));
}

TEST_CASE("make_gaussian_dataset is deterministic and labelled") {
  GaussianPrior prior = GaussianPrior::smooth_field(8, 8, 0.2);
  auto a = uqx::make_gaussian_dataset(prior, 5, 99);
  auto b = uqx::make_gaussian_dataset(prior, 5, 99);
  REQUIRE(a.items.size() == 5);
  CHECK(a.labels[3] == "synthetic-3");
  for (int i = 0; i < 5; ++i) CHECK(uqx::linf_diff(a.items[i], b.items[i]) == 0.0);
  CHECK(a.uniform_dims());
}

TEST_CASE("brute coverage: calibration identity for the true model") {
  const int side = 8;
  GaussianPrior prior = GaussianPrior::smooth_field(side, side, 0.5);
  ObservationModel m{BlurKernel::uniform(3), 0.1};
  const double alpha = 0.2;
  const int M = 1500;
  for (auto kind : {uqx::RegionKind::ball, uqx::RegionKind::hpd}) {
    const double cov = uqx::brute_coverage(prior, prior, m, alpha, kind, M, 400, 17);
    const double band = 3.0 * std::sqrt(alpha * (1.0 - alpha) / M);
    CAPTURE(static_cast<int>(kind));
    CHECK(std::abs(cov - (1.0 - alpha)) < band + 0.01);
  }
}

TEST_CASE("brute coverage: misspecified prior variance has the forced sign") {
  const int side = 8;
  GaussianPrior truth = GaussianPrior::smooth_field(side, side, 0.5);
  ObservationModel m{BlurKernel::uniform(3), 0.1};
  const double alpha = 0.1;
  const int M = 1200;
  const double under =
      uqx::brute_coverage(truth, truth.scaled(0.25), m, alpha, uqx::RegionKind::ball, M,
                          400, 23);
  const double over = uqx::brute_coverage(truth, truth.scaled(4.0), m, alpha,
                                          uqx::RegionKind::ball, M, 400, 29);
  CHECK(under < 1.0 - alpha - 0.02);  // overconfident model misses too often
  CHECK(over > 1.0 - alpha + 0.02);   // conservative model almost never misses
}
