// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "support/oracles.hpp"
#include "uqx/crr.hpp"
#include "uqx/errors.hpp"

using uqx::CrrModel;
using uqx::Image;
using uqx::PwQuadActivation;

namespace {

// psi'(t) = t on integer knots spanning [-3, 3]: psi(t) = t^2/2 exactly,
// including the linear extrapolation beyond the end knots.
PwQuadActivation quadratic_activation() {
  return PwQuadActivation(-3.0, 1.0, {-3, -2, -1, 0, 1, 2, 3});
}

CrrModel quadratic_identity_model(double lambda) {
  CrrModel m;
  m.lambda = lambda;
  m.filters.push_back(Image(1, 1, 1.0));
  m.activations.push_back(quadratic_activation());
  return m;
}

}  // namespace

TEST_CASE("activation reproduces t^2/2 exactly") {
  auto act = quadratic_activation();
  for (double t : {-5.0, -2.5, -1.0, 0.0, 0.3, 1.7, 2.0, 8.0}) {
    CHECK(act.deriv(t) == doctest::Approx(t).epsilon(1e-14));
    CHECK(act.value(t) == doctest::Approx(t * t / 2.0).epsilon(1e-14));
  }
  CHECK(act.deriv_lipschitz() == doctest::Approx(1.0));
}

TEST_CASE("activation rejects decreasing derivative knots") {
  CHECK_THROWS_AS(PwQuadActivation(-1.0, 1.0, {0.0, -0.5, 1.0}), uqx::InvalidModel);
}

TEST_CASE("quadratic specialisation: potential and gradient in closed form") {
  auto m = quadratic_identity_model(2.3);
  Image x(4, 4);
  oracle::lcg_fill(x, 13, -0.8, 0.8);
  CHECK(uqx::crr_potential(x, m) ==
        doctest::Approx(2.3 * uqx::norm2sq(x) / 2.0).epsilon(1e-12));
  Image g = uqx::crr_grad(x, m);
  Image want = 2.3 * x;
  CHECK(uqx::linf_diff(g, want) < 1e-12);
}

TEST_CASE("builtin model: gradient matches central finite differences") {
  auto m = CrrModel::builtin(4.0, 0.05);
  Image x(4, 4);
  oracle::lcg_fill(x, 29);
  // The potential is piece-wise quadratic; central differences are exact
  // unless a filter response sits within the FD step of a knot. Verify the
  // seed keeps responses clear of knots.
  for (const auto& f : m.filters) {
    Image resp = oracle::conv_spatial_brute(x, [&f] {
      uqx::BlurKernel k;
      k.height = f.height;
      k.width = f.width;
      k.taps = f.pixels;
      return k;
    }());
    for (double t : resp.pixels)
      for (double knot = -0.10; knot <= 0.105; knot += 0.05)
        REQUIRE(std::abs(t - knot) > 2e-4);
  }
  Image g = uqx::crr_grad(x, m);
  Image fd = oracle::finite_diff_grad(
      [&m](const Image& z) { return uqx::crr_potential(z, m); }, x);
  CHECK(uqx::norm2(g - fd) / uqx::norm2(g) < 1e-6);
}

TEST_CASE("potential is midpoint convex") {
  auto m = CrrModel::builtin(3.0, 0.05);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Image x(5, 5), z(5, 5);
    oracle::lcg_fill(x, 2 * seed + 1);
    oracle::lcg_fill(z, 2 * seed + 2);
    Image mid(5, 5);
    for (int i = 0; i < mid.size(); ++i)
      mid.pixels[i] = 0.5 * (x.pixels[i] + z.pixels[i]);
    CHECK(uqx::crr_potential(mid, m) <=
          0.5 * (uqx::crr_potential(x, m) + uqx::crr_potential(z, m)) + 1e-10);
  }
}

TEST_CASE("gradient lipschitz bound dominates observed curvature") {
  auto m = CrrModel::builtin(2.0, 0.05);
  const double bound = uqx::crr_grad_lipschitz(m, 8, 8);
  CHECK(bound > 0.0);
  Image x(8, 8), z(8, 8);
  oracle::lcg_fill(x, 3);
  oracle::lcg_fill(z, 4);
  Image gx = uqx::crr_grad(x, m);
  Image gz = uqx::crr_grad(z, m);
  CHECK(uqx::norm2(gx - gz) <= bound * uqx::norm2(x - z) * (1.0 + 1e-9));
}

TEST_CASE("weight file round trip and validation") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "uqx_crr";
  fs::create_directories(dir);
  const fs::path path = dir / "weights.crr";

  auto m = CrrModel::builtin(1.5, 0.04);
  uqx::save_crr(path, m);
  auto back = uqx::load_crr(path);
  REQUIRE(back.filters.size() == m.filters.size());
  CHECK(back.lambda == m.lambda);
  for (std::size_t i = 0; i < m.filters.size(); ++i) {
    CHECK(uqx::linf_diff(back.filters[i], m.filters[i]) == 0.0);
    CHECK(back.activations[i].derivs() == m.activations[i].derivs());
  }
  // Behavioural equality on a random image.
  Image x(6, 6);
  oracle::lcg_fill(x, 17);
  CHECK(uqx::crr_potential(x, back) == doctest::Approx(uqx::crr_potential(x, m)));

  // Corrupt a derivative value so its row decreases; the loader must reject it.
  uqx::save_crr(path, m);
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  // Header is 4+16+24 bytes, then 8 filters of 9 f64; poke row 2, knot 1.
  const std::size_t offset = 4 + 16 + 24 + 8 * 9 * 8 + (2 * 5 + 1) * 8;
  f.seekp(offset);
  const double wrong = -1.0;  // below its predecessor
  f.write(reinterpret_cast<const char*>(&wrong), sizeof(wrong));
  f.close();
  CHECK_THROWS_AS(uqx::load_crr(path), uqx::InvalidModel);

  // Bad magic.
  std::fstream g(path, std::ios::in | std::ios::out | std::ios::binary);
  g.seekp(0);
  g.write("NOPE", 4);
  g.close();
  CHECK_THROWS_AS(uqx::load_crr(path), uqx::InvalidModel);
}

TEST_CASE("model validation") {
  CrrModel empty;
  CHECK_THROWS_AS(uqx::crr_potential(Image(2, 2, 0.0), empty), uqx::InvalidModel);
  auto m = quadratic_identity_model(1.0);
  m.lambda = 0.0;
  CHECK_THROWS_AS(uqx::crr_potential(Image(2, 2, 0.0), m), uqx::InvalidModel);
}
