// SPDX-License-Identifier: Apache-2.0
#include "uqx/regions.hpp"

#include <algorithm>
#include <cmath>

#include "uqx/errors.hpp"

namespace uqx {

bool HpdRegion::contains(const Image& candidate) const {
  if (!potential)
    throw UnsupportedRegion("HPD region: no potential evaluator for this sampler");
  return potential(candidate) >= gamma_alpha;
}

bool BallRegion::contains(const Image& candidate) const {
  require_same_shape(candidate, center, "BallRegion::contains");
  double d2 = 0.0;
  for (int i = 0; i < center.size(); ++i) {
    const double d = candidate.pixels[i] - center.pixels[i];
    d2 += d * d;
  }
  return std::sqrt(d2) <= radius;
}

double hpd_threshold(const std::vector<double>& potentials, double alpha) {
  if (potentials.empty()) throw InvalidArgument("hpd_threshold: empty potential sequence");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("hpd_threshold: alpha must be in (0,1)");
  for (double u : potentials)
    if (!std::isfinite(u)) throw InvalidArgument("hpd_threshold: non-finite potential");
  std::vector<double> sorted = potentials;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto idx = static_cast<long>(std::floor(alpha * n));  // 1-based lower order stat
  idx = std::max<long>(1, std::min<long>(idx, static_cast<long>(sorted.size())));
  return sorted[static_cast<std::size_t>(idx - 1)];
}

HpdRegion hpd_from_chain(const std::vector<double>& potentials, double alpha,
                         PotentialFn potential) {
  HpdRegion r;
  r.gamma_alpha = hpd_threshold(potentials, alpha);
  r.alpha = alpha;
  r.potential = std::move(potential);
  return r;
}

BallRegion ball_from_chain(const std::vector<Image>& samples, double alpha) {
  if (samples.size() < 2)
    throw InvalidArgument("ball_from_chain: needs at least 2 samples");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("ball_from_chain: alpha must be in (0,1)");
  for (const auto& s : samples)
    require_same_shape(s, samples.front(), "ball_from_chain");

  BallRegion r;
  r.alpha = alpha;
  Image mean(samples.front().height, samples.front().width, 0.0);
  for (const auto& s : samples) axpy(mean, 1.0, s);
  for (double& v : mean.pixels) v /= static_cast<double>(samples.size());

  std::vector<double> dist;
  dist.reserve(samples.size());
  for (const auto& s : samples) {
    double d2 = 0.0;
    for (int i = 0; i < mean.size(); ++i) {
      const double d = s.pixels[i] - mean.pixels[i];
      d2 += d * d;
    }
    dist.push_back(std::sqrt(d2));
  }
  std::sort(dist.begin(), dist.end());
  const auto n = static_cast<double>(dist.size());
  auto idx = static_cast<long>(std::ceil((1.0 - alpha) * n));  // 1-based upper stat
  idx = std::max<long>(1, std::min<long>(idx, static_cast<long>(dist.size())));
  r.radius = dist[static_cast<std::size_t>(idx - 1)];
  r.center = std::move(mean);
  return r;
}

}  // namespace uqx
