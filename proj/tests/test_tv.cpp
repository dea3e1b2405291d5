// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "uqx/errors.hpp"
#include "uqx/tv.hpp"

using uqx::Image;
using uqx::TvPotential;

namespace {

// Independent dual projected-gradient reference with its own difference
// operators (nothing shared with the library implementation).
Image tv_prox_brute(const Image& v, double weight, int iters) {
  const int h = v.height, w = v.width;
  const int n = h * w;
  std::vector<double> ph(n, 0.0), pv(n, 0.0);
  auto idx = [w](int r, int c) { return r * w + c; };
  std::vector<double> div(n), gh(n), gv(n);
  const double tau = 1.0 / 8.0;
  for (int it = 0; it < iters; ++it) {
    // divergence-like adjoint: (D^T p)[r,c]
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        const int cp = (c - 1 + w) % w, rp = (r - 1 + h) % h;
        div[idx(r, c)] = ph[idx(r, cp)] - ph[idx(r, c)] + pv[idx(rp, c)] - pv[idx(r, c)];
      }
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        const int cn = (c + 1) % w, rn = (r + 1) % h;
        const double res = [&](int rr, int cc) {
          return div[idx(rr, cc)] - v.at(rr, cc);
        }(r, c);
        gh[idx(r, c)] = (div[idx(r, cn)] - v.at(r, cn)) - res;
        gv[idx(r, c)] = (div[idx(rn, c)] - v.at(rn, c)) - res;
      }
    for (int i = 0; i < n; ++i) {
      double nh = ph[i] - tau * gh[i];
      double nv = pv[i] - tau * gv[i];
      const double norm = std::sqrt(nh * nh + nv * nv);
      if (norm > weight) {
        nh *= weight / norm;
        nv *= weight / norm;
      }
      ph[i] = nh;
      pv[i] = nv;
    }
  }
  Image u(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const int cp = (c - 1 + w) % w, rp = (r - 1 + h) % h;
      u.at(r, c) = v.at(r, c) - (ph[idx(r, cp)] - ph[idx(r, c)] + pv[idx(rp, c)] -
                                 pv[idx(r, c)]);
    }
  return u;
}

}  // namespace

TEST_CASE("tv value hand cases") {
  CHECK(TvPotential::tv(Image(5, 7, 0.42)) == 0.0);

  // 1x2 image [0,1]: circular horizontal differences +1 and -1, no vertical.
  Image two(1, 2);
  two.pixels = {0.0, 1.0};
  CHECK(TvPotential::tv(two) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("tv is 1-homogeneous and translation invariant") {
  Image x(6, 6);
  oracle::lcg_fill(x, 11);
  const double base = TvPotential::tv(x);
  Image cx = 3.7 * x;
  CHECK(TvPotential::tv(cx) == doctest::Approx(3.7 * base).epsilon(1e-10));
  Image shifted = x;
  for (double& v : shifted.pixels) v += 0.4;
  CHECK(TvPotential::tv(shifted) == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("adjointness of the difference operators") {
  Image x(5, 6), z(5, 6);
  oracle::lcg_fill(x, 3);
  const int n = x.size();
  std::vector<double> dh(n), dv(n), ph(n), pv(n);
  Image tmp(5, 6);
  oracle::lcg_fill(tmp, 4);
  ph.assign(tmp.pixels.begin(), tmp.pixels.end());
  oracle::lcg_fill(tmp, 5);
  pv.assign(tmp.pixels.begin(), tmp.pixels.end());
  uqx::tv_forward_diff(x, dh, dv);
  uqx::tv_adjoint(ph, pv, z);
  double lhs = 0.0;
  for (int i = 0; i < n; ++i) lhs += dh[i] * ph[i] + dv[i] * pv[i];
  CHECK(lhs == doctest::Approx(uqx::dot(x, z)).epsilon(1e-12));
}

TEST_CASE("prox of a vanishing penalty returns the input") {
  TvPotential tv{1.0};
  Image v(8, 8);
  oracle::lcg_fill(v, 21);
  auto res = tv.prox(v, 1e-12);
  CHECK(uqx::linf_diff(res.u, v) < 1e-8);
  CHECK(res.converged);
}

TEST_CASE("constant input is a fixed point") {
  TvPotential tv{2.5};
  Image v(6, 6, 0.3);
  auto res = tv.prox(v, 0.7);
  CHECK(uqx::linf_diff(res.u, v) < 1e-10);
}

TEST_CASE("prox converges to the stated gap at the default stopping rule") {
  TvPotential tv{1.0};
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Image v(8, 8);
    oracle::lcg_fill(v, 100 + seed);
    auto res = tv.prox(v, 0.08);
    CAPTURE(seed);
    CHECK(res.converged);
    CHECK(res.gap <= 1e-6);
  }
}

TEST_CASE("a reference-quality solve matches the brute-force dual to 1e-5") {
  TvPotential tv{1.0};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Image v(8, 8);
    oracle::lcg_fill(v, 100 + seed);
    const double theta = 0.08;
    auto res = tv.prox(v, theta, nullptr, 1e-14, 20000);
    Image ref = tv_prox_brute(v, theta * tv.lambda, 60000);
    CAPTURE(seed);
    CHECK(uqx::linf_diff(res.u, ref) < 1e-5);
  }
}

TEST_CASE("subgradient optimality residual on a reference-quality solve") {
  TvPotential tv{1.3};
  Image v(8, 8);
  oracle::lcg_fill(v, 77);
  const double theta = 0.06;
  const double weight = theta * tv.lambda;
  auto res = tv.prox(v, theta, nullptr, 1e-14, 20000);

  const int n = v.size();
  std::vector<double> dh(n), dv(n);
  uqx::tv_forward_diff(res.u, dh, dv);
  // Best subgradient consistent with the dual certificate: normalised
  // gradient on pixels clearly active at the achieved accuracy, the
  // (feasible) dual direction elsewhere.
  const double active_thr =
      std::max(1e-5, 10.0 * std::sqrt(2.0 * std::max(res.gap, 0.0)));
  std::vector<double> sh(n), sv(n);
  for (int i = 0; i < n; ++i) {
    const double norm = std::sqrt(dh[i] * dh[i] + dv[i] * dv[i]);
    if (norm > active_thr) {
      sh[i] = dh[i] / norm;
      sv[i] = dv[i] / norm;
    } else {
      sh[i] = res.dual.ph[i] / weight;
      sv[i] = res.dual.pv[i] / weight;
    }
  }
  Image g(8, 8);
  uqx::tv_adjoint(sh, sv, g);
  double resid = 0.0;
  for (int i = 0; i < n; ++i) {
    const double want = (v.pixels[i] - res.u.pixels[i]) / weight;
    resid += (want - g.pixels[i]) * (want - g.pixels[i]);
  }
  CHECK(std::sqrt(resid) <= 1e-4);
}

TEST_CASE("prox is non-expansive") {
  TvPotential tv{1.0};
  Image a(8, 8), b(8, 8);
  oracle::lcg_fill(a, 8);
  oracle::lcg_fill(b, 9);
  const double theta = 0.1;
  Image pa = tv.prox(a, theta).u;
  Image pb = tv.prox(b, theta).u;
  CHECK(uqx::norm2(pa - pb) <= uqx::norm2(a - b) + 1e-9);
}

TEST_CASE("warm start reaches the same minimiser") {
  TvPotential tv{1.0};
  Image v(8, 8);
  oracle::lcg_fill(v, 55);
  auto cold = tv.prox(v, 0.05);
  auto near = tv.prox(v, 0.05, &cold.dual);
  CHECK(near.iterations <= cold.iterations);
  CHECK(uqx::linf_diff(cold.u, near.u) < 1e-6);
}

TEST_CASE("prox validates theta") {
  TvPotential tv{1.0};
  CHECK_THROWS_AS(tv.prox(Image(2, 2, 0.0), 0.0), uqx::InvalidArgument);
  CHECK_THROWS_AS(tv.prox(Image(2, 2, 0.0), -1.0), uqx::InvalidArgument);
  TvPotential bad{0.0};
  CHECK_THROWS_AS(bad.prox(Image(2, 2, 0.0), 1.0), uqx::InvalidArgument);
}
