// SPDX-License-Identifier: Apache-2.0
#include "uqx/gmrf.hpp"

#include <cmath>

#include "uqx/errors.hpp"

namespace uqx {

Image laplacian_spectrum(int height, int width) {
  Image s(height, width);
  constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      s.at(r, c) = 4.0 - 2.0 * std::cos(kTwoPi * r / height) -
                   2.0 * std::cos(kTwoPi * c / width);
  return s;
}

GmrfPrior GmrfPrior::laplacian(int height, int width, double delta, double dc_ridge) {
  GmrfPrior p;
  p.spectrum = laplacian_spectrum(height, width);
  p.delta = delta;
  p.dc_ridge = dc_ridge;
  p.validate();
  return p;
}

void GmrfPrior::validate() const {
  if (!(delta > 0.0)) throw InvalidArgument("GmrfPrior: delta must be positive");
  if (!(dc_ridge > 0.0)) throw InvalidArgument("GmrfPrior: dc_ridge must be positive");
  for (double v : spectrum.pixels)
    if (!(v + dc_ridge > 0.0))
      throw InvalidArgument("GmrfPrior: precision spectrum must be positive after ridge");
}

double gmrf_potential(const Image& x, const GmrfPrior& p) {
  require_same_shape(x, p.spectrum, "gmrf_potential");
  const Spectrum xf = fft2(x);
  double quad = 0.0;
  for (std::size_t i = 0; i < xf.size(); ++i)
    quad += (p.spectrum.pixels[i] + p.dc_ridge) * std::norm(xf[i]);
  quad /= x.size();  // Parseval for the unnormalised DFT
  return 0.5 * p.delta * quad;
}

Image gmrf_grad(const Image& x, const GmrfPrior& p) {
  require_same_shape(x, p.spectrum, "gmrf_grad");
  Spectrum xf = fft2(x);
  for (std::size_t i = 0; i < xf.size(); ++i)
    xf[i] *= p.delta * (p.spectrum.pixels[i] + p.dc_ridge);
  return ifft2_real(xf, x.height, x.width);
}

}  // namespace uqx
