// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace uqx {

struct Interval {
  double low = 0.0;
  double high = 0.0;
  bool contains(double v) const { return low <= v && v <= high; }
};

/// Quantile function of the standard normal, |error| < 1e-13 on (0,1).
double inverse_normal_cdf(double p);

/// Wilson score interval for the success probability after `successes`
/// out of `n` trials, at confidence `level` (e.g. 0.95).
Interval wilson_interval(std::int64_t successes, std::int64_t n, double level);

}  // namespace uqx
