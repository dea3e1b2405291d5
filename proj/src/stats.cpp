// SPDX-License-Identifier: Apache-2.0
#include "uqx/stats.hpp"

#include <cmath>

#include "uqx/errors.hpp"

namespace uqx {
namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Acklam's rational approximation, then one Newton step against erfc.
double inv_normal_raw(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  return x;
}

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidArgument("inverse_normal_cdf: p must be in (0,1)");
  double x = inv_normal_raw(p);
  // One Newton refinement; the density is safely positive here.
  const double e = normal_cdf(x) - p;
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
  if (pdf > 0.0) x -= e / pdf;
  return x;
}

Interval wilson_interval(std::int64_t successes, std::int64_t n, double level) {
  if (n < 1) throw InvalidArgument("wilson_interval: n must be at least 1");
  if (successes < 0 || successes > n)
    throw InvalidArgument("wilson_interval: successes must be in [0, n]");
  if (!(level > 0.0 && level < 1.0))
    throw InvalidArgument("wilson_interval: level must be in (0,1)");
  const double z = inverse_normal_cdf(1.0 - (1.0 - level) / 2.0);
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (phat + z2 / (2.0 * nn)) / denom;
  const double half =
      (z / denom) * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
  Interval iv{centre - half, centre + half};
  if (iv.low < 0.0) iv.low = 0.0;
  if (iv.high > 1.0) iv.high = 1.0;
  // The score interval's endpoints are exact at the boundary counts.
  if (successes == 0) iv.low = 0.0;
  if (successes == n) iv.high = 1.0;
  return iv;
}

}  // namespace uqx
