// SPDX-License-Identifier: Apache-2.0
#include "uqx/model.hpp"

#include <cmath>
#include <string>

#include "uqx/errors.hpp"

namespace uqx {

BlurKernel BlurKernel::uniform(int size) {
  if (size < 1 || size % 2 == 0)
    throw InvalidArgument("BlurKernel::uniform: size must be odd and positive");
  BlurKernel k;
  k.height = k.width = size;
  const int n = size * size;
  // 1/n in floating point does not sum to 1 exactly for all n; fix the
  // centre tap so the sum is 1 to machine precision.
  k.taps.assign(n, 1.0 / n);
  double s = 0.0;
  for (double t : k.taps) s += t;
  k.taps[static_cast<std::size_t>(n) / 2] += 1.0 - s;
  return k;
}

BlurKernel BlurKernel::identity() { return BlurKernel{}; }

void BlurKernel::validate() const {
  if (height < 1 || width < 1 || height % 2 == 0 || width % 2 == 0)
    throw InvalidArgument("BlurKernel: side lengths must be odd and positive");
  if (taps.size() != static_cast<std::size_t>(height) * width)
    throw InvalidArgument("BlurKernel: tap buffer size mismatch");
  for (double t : taps)
    if (!std::isfinite(t)) throw InvalidArgument("BlurKernel: non-finite tap");
}

void ObservationModel::validate() const {
  kernel.validate();
  if (!(noise_sigma > 0.0))
    throw InvalidArgument("ObservationModel: noise_sigma must be positive");
}

namespace {

// Embed the kernel into an h x w grid with the anchor at (0,0) and
// wraparound, so that IFFT(FFT(embed) * FFT(x)) stamps unflipped taps.
Image embed_kernel(const BlurKernel& k, int h, int w) {
  Image pad(h, w, 0.0);
  const int cr = k.height / 2;
  const int cc = k.width / 2;
  for (int i = 0; i < k.height; ++i) {
    for (int j = 0; j < k.width; ++j) {
      const int r = ((i - cr) % h + h) % h;
      const int c = ((j - cc) % w + w) % w;
      pad.at(r, c) += k.at(i, j);
    }
  }
  return pad;
}

}  // namespace

Spectrum ObservationModel::transfer(int height, int width) const {
  kernel.validate();
  if (kernel.height > height || kernel.width > width)
    throw InvalidArgument("ObservationModel::transfer: kernel larger than image");
  return fft2(embed_kernel(kernel, height, width));
}

Image convolve_circular(const Image& x, const BlurKernel& k) {
  k.validate();
  if (k.height > x.height || k.width > x.width)
    throw InvalidArgument("convolve_circular: kernel side lengths exceed image");
  Spectrum xf = fft2(x);
  const Spectrum kf = fft2(embed_kernel(k, x.height, x.width));
  for (std::size_t i = 0; i < xf.size(); ++i) xf[i] *= kf[i];
  return ifft2_real(xf, x.height, x.width);
}

Image apply_transfer(const Spectrum& transfer, const Image& x, bool adjoint) {
  Spectrum xf = fft2(x);
  if (xf.size() != transfer.size())
    throw InvalidArgument("apply_transfer: spectrum size mismatch");
  for (std::size_t i = 0; i < xf.size(); ++i)
    xf[i] *= adjoint ? std::conj(transfer[i]) : transfer[i];
  return ifft2_real(xf, x.height, x.width);
}

double sigma_from_bsnr(const Image& blurred, double bsnr_db) {
  const int n = blurred.size();
  double mean = 0.0;
  for (double v : blurred.pixels) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : blurred.pixels) var += (v - mean) * (v - mean);
  var /= n;
  if (var <= 1e-24)
    throw DegenerateInput("sigma_from_bsnr: blurred image has zero pixel variance");
  return std::sqrt(var * std::pow(10.0, -bsnr_db / 10.0));
}

Image sample_observation(const Image& x, const ObservationModel& m, RngStream& rng) {
  m.validate();
  Image y = convolve_circular(x, m.kernel);
  for (double& v : y.pixels) v += m.noise_sigma * rng.normal();
  return y;
}

double psnr(const Image& reference, const Image& estimate) {
  require_same_shape(reference, estimate, "psnr");
  double mse = 0.0;
  for (int i = 0; i < reference.size(); ++i) {
    const double d = reference.pixels[i] - estimate.pixels[i];
    mse += d * d;
  }
  mse /= reference.size();
  constexpr double kCapDb = 200.0;
  if (mse <= 0.0) return kCapDb;
  return std::min(kCapDb, 10.0 * std::log10(1.0 / mse));
}

Image gaussian_image(int height, int width, RngStream& rng) {
  Image out(height, width);
  for (double& v : out.pixels) v = rng.normal();
  return out;
}

GaussianLikelihood GaussianLikelihood::make(const Image& y, const ObservationModel& m) {
  m.validate();
  GaussianLikelihood lik;
  lik.transfer = m.transfer(y.height, y.width);
  lik.y_hat = fft2(y);
  lik.sigma = m.noise_sigma;
  lik.height = y.height;
  lik.width = y.width;
  return lik;
}

Image GaussianLikelihood::grad(const Image& x) const {
  Spectrum xf = fft2(x);
  const double inv_var = 1.0 / (sigma * sigma);
  for (std::size_t i = 0; i < xf.size(); ++i)
    xf[i] = std::conj(transfer[i]) * (y_hat[i] - transfer[i] * xf[i]) * inv_var;
  return ifft2_real(xf, height, width);
}

double GaussianLikelihood::log_density(const Image& x) const {
  const Spectrum xf = fft2(x);
  double ss = 0.0;
  for (std::size_t i = 0; i < xf.size(); ++i) ss += std::norm(y_hat[i] - transfer[i] * xf[i]);
  ss /= static_cast<double>(height) * width;  // Parseval
  return -ss / (2.0 * sigma * sigma);
}

double GaussianLikelihood::lipschitz() const {
  double maxmag2 = 0.0;
  for (const auto& t : transfer) maxmag2 = std::max(maxmag2, std::norm(t));
  return maxmag2 / (sigma * sigma);
}

}  // namespace uqx
