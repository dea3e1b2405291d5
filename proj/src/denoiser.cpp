// SPDX-License-Identifier: Apache-2.0
#include "uqx/denoiser.hpp"

#include "uqx/errors.hpp"
#include "uqx/model.hpp"
#include "uqx/protocol.hpp"

namespace uqx {

void DenoiserSpec::validate() const {
  if (!(epsilon > 0.0)) throw InvalidArgument("DenoiserSpec: epsilon must be positive");
  if (kind == Kind::gaussian_mmse && !(mmse_prior_var > 0.0))
    throw InvalidArgument("DenoiserSpec: mmse prior variance must be positive");
  if (kind == Kind::external && endpoint.empty())
    throw InvalidArgument("DenoiserSpec: external denoiser needs an endpoint");
}

namespace {

// MMSE denoiser for a N(0, s^2 I) prior under noise variance eps:
// D(x) = s^2 / (s^2 + eps) * x.
class GaussianMmseDenoiser final : public Denoiser {
 public:
  GaussianMmseDenoiser(double prior_var, double eps)
      : shrink_(prior_var / (prior_var + eps)) {}
  Image denoise(const Image& x) override { return shrink_ * x; }

 private:
  double shrink_;
};

class SmoothingDenoiser final : public Denoiser {
 public:
  SmoothingDenoiser() {
    kernel_.height = kernel_.width = 3;
    // Normalised 3x3 binomial low-pass.
    kernel_.taps = {1.0 / 16, 2.0 / 16, 1.0 / 16, 2.0 / 16, 4.0 / 16,
                    2.0 / 16, 1.0 / 16, 2.0 / 16, 1.0 / 16};
  }
  Image denoise(const Image& x) override { return convolve_circular(x, kernel_); }

 private:
  BlurKernel kernel_;
};

class ExternalDenoiser final : public Denoiser {
 public:
  explicit ExternalDenoiser(const std::string& endpoint)
      : client_(proto::Client::connect(endpoint)) {}
  Image denoise(const Image& x) override { return client_->denoise(x); }

 private:
  std::unique_ptr<proto::Client> client_;
};

}  // namespace

std::unique_ptr<Denoiser> make_denoiser(const DenoiserSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case DenoiserSpec::Kind::gaussian_mmse:
      return std::make_unique<GaussianMmseDenoiser>(spec.mmse_prior_var, spec.epsilon);
    case DenoiserSpec::Kind::smoothing:
      return std::make_unique<SmoothingDenoiser>();
    case DenoiserSpec::Kind::external:
      return std::make_unique<ExternalDenoiser>(spec.endpoint);
  }
  throw InvalidArgument("DenoiserSpec: unknown kind");
}

Image tweedie_score(const Image& x, Denoiser& d, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("tweedie_score: epsilon must be positive");
  Image dx = d.denoise(x);
  if (!dx.same_shape(x))
    throw ProtocolError("denoiser changed image dimensions");
  for (int i = 0; i < x.size(); ++i)
    dx.pixels[i] = (dx.pixels[i] - x.pixels[i]) / epsilon;
  return dx;
}

}  // namespace uqx
