// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "uqx/image.hpp"

namespace uqx {

/// An image denoiser D_epsilon for additive Gaussian noise of variance
/// epsilon; drives the Tweedie score approximation.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual Image denoise(const Image& x) = 0;
};

struct DenoiserSpec {
  enum class Kind { gaussian_mmse, smoothing, external };
  Kind kind = Kind::gaussian_mmse;
  double epsilon = 0.05;        // training noise variance
  double mmse_prior_var = 1.0;  // s^2 of the N(0, s^2 I) prior (gaussian_mmse)
  std::string endpoint;         // external only

  void validate() const;
};

std::unique_ptr<Denoiser> make_denoiser(const DenoiserSpec& spec);

/// (D_eps(x) - x) / eps; throws ProtocolError if the denoiser changes
/// dimensions.
Image tweedie_score(const Image& x, Denoiser& d, double epsilon);

}  // namespace uqx
