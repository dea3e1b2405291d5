// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <vector>

#include "uqx/image.hpp"

namespace uqx {

/// Convex piece-wise quadratic scalar activation, stored as uniformly spaced
/// knots with the derivative value at each knot. The derivative is evaluated
/// by linear interpolation (linear extrapolation beyond the end knots) and
/// the value by exact integration of that interpolant, anchored so that
/// psi(0) = 0 whenever 0 lies inside the knot range.
class PwQuadActivation {
 public:
  PwQuadActivation(double knot_origin, double spacing, std::vector<double> derivs);

  double deriv(double t) const;
  double value(double t) const;
  /// Maximum slope of the derivative interpolant (Lipschitz constant of psi').
  double deriv_lipschitz() const;

  double knot_origin() const { return origin_; }
  double spacing() const { return spacing_; }
  const std::vector<double>& derivs() const { return derivs_; }

  /// Non-decreasing derivative knots (convexity), up to tolerance.
  static bool monotone(const std::vector<double>& derivs, double tol = 1e-12);

 private:
  double origin_;
  double spacing_;
  std::vector<double> derivs_;
  std::vector<double> cumulative_;  // integral of the interpolant up to each knot
  double anchor_offset_ = 0.0;      // value subtracted so psi(anchor) = 0
  double raw_value(double t) const;
};

/// Convex ridge regulariser: lambda * sum_i sum_p psi_i((W_i x)[p]) with W_i
/// circular convolution by a small learned filter.
struct CrrModel {
  std::vector<Image> filters;  // odd-sized kernels
  std::vector<PwQuadActivation> activations;
  double lambda = 1.0;

  void validate() const;

  /// Built-in fallback model: 8 neighbour-difference filters with Huber-like
  /// activations, so the pipeline runs without external weight files.
  static CrrModel builtin(double lambda = 5.0, double huber_delta = 0.05);
};

double crr_potential(const Image& x, const CrrModel& m);
Image crr_grad(const Image& x, const CrrModel& m);

/// Lipschitz bound of crr_grad on an h x w grid: lambda * sum_i Lip(psi_i')
/// * ||W_i||^2 with the exact circulant operator norm.
double crr_grad_lipschitz(const CrrModel& m, int height, int width);

/// Binary little-endian weight file: magic "CRR1", L u32, filter h/w u32,
/// knot count u32, spacing f64, origin f64, lambda f64, filters f64
/// row-major, then L x K derivative values f64. Non-monotone derivative
/// rows are rejected.
CrrModel load_crr(const std::filesystem::path& path);
void save_crr(const std::filesystem::path& path, const CrrModel& m);

}  // namespace uqx
