// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uqx/image.hpp"

namespace uqx {

/// Dual variable of the TV prox: one (horizontal, vertical) pair per pixel.
struct TvDual {
  std::vector<double> ph;
  std::vector<double> pv;
  bool empty() const { return ph.empty(); }
};

struct TvProxResult {
  Image u;
  bool converged = false;
  int iterations = 0;
  double gap = 0.0;
  TvDual dual;  // certificate; also reusable as a warm start
};

/// Isotropic total-variation potential lambda * TV(x) with circular
/// first-order differences.
struct TvPotential {
  double lambda = 1.0;

  void validate() const;

  /// TV(x) = sum_i sqrt((dh_i)^2 + (dv_i)^2); the lambda weight is NOT
  /// applied here.
  static double tv(const Image& x);
  double value(const Image& x) const { return lambda * tv(x); }

  /// prox_{theta*lambda*TV}(v) by accelerated projected gradient on the
  /// dual (with adaptive momentum restart), fixed step 1/8, duality-gap
  /// stop 1e-6, at most 200 iterations. A non-empty warm_start seeds the
  /// dual variable. gap_tol/max_iter expose the stopping rule for callers
  /// needing a reference-quality solve; the defaults are the contract.
  TvProxResult prox(const Image& v, double theta, const TvDual* warm_start = nullptr,
                    double gap_tol = 1e-6, int max_iter = 200) const;
};

/// Forward circular differences; outputs must be preallocated to x.size().
void tv_forward_diff(const Image& x, std::vector<double>& dh, std::vector<double>& dv);
/// Negative divergence (adjoint of tv_forward_diff).
void tv_adjoint(const std::vector<double>& ph, const std::vector<double>& pv, Image& out);

}  // namespace uqx
