// SPDX-License-Identifier: Apache-2.0
#include "uqx/chain.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "uqx/errors.hpp"

namespace uqx {

void ChainConfig::validate() const {
  if (n_burnin < 0) throw InvalidArgument("ChainConfig: n_burnin must be >= 0");
  if (n_samples < 1) throw InvalidArgument("ChainConfig: n_samples must be >= 1");
  if (thinning < 1) throw InvalidArgument("ChainConfig: thinning must be >= 1");
}

void ChainOutput::finalize_moments() {
  if (samples.empty()) return;
  const int h = samples.front().height;
  const int w = samples.front().width;
  Image sum(h, w, 0.0), sumsq(h, w, 0.0);
  for (const auto& s : samples)
    for (int i = 0; i < s.size(); ++i) {
      sum.pixels[i] += s.pixels[i];
      sumsq.pixels[i] += s.pixels[i] * s.pixels[i];
    }
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (int i = 0; i < sum.size(); ++i) {
    sum.pixels[i] *= inv;
    sumsq.pixels[i] *= inv;
  }
  mean = std::move(sum);
  second_moment = std::move(sumsq);
}

void require_stable_step(double step, double lipschitz_bound, const char* sampler) {
  if (!(step > 0.0))
    throw InvalidArgument(std::string(sampler) + ": step_size must be positive");
  if (lipschitz_bound > 0.0 && step > 1.0 / lipschitz_bound)
    throw InvalidArgument(std::string(sampler) + ": step_size " + std::to_string(step) +
                          " exceeds the stability bound 1/L = " +
                          std::to_string(1.0 / lipschitz_bound));
}

ChainOutput ula_chain(const DriftFn& drift, const PotentialFn* potential,
                      const Image& x0, const ChainConfig& cfg, RngStream rng) {
  cfg.validate();
  if (!(cfg.step_size > 0.0)) throw InvalidArgument("ula_chain: step_size must be positive");
  const auto t0 = std::chrono::steady_clock::now();

  const double delta = cfg.step_size;
  const double noise_scale = std::sqrt(2.0 * delta);
  Image x = x0;
  long step_index = 0;

  auto advance = [&]() {
    const Image g = drift(x);
    for (int i = 0; i < x.size(); ++i)
      x.pixels[i] += delta * g.pixels[i] + noise_scale * rng.normal();
    ++step_index;
    for (double v : x.pixels)
      if (!std::isfinite(v))
        throw DivergedChain(step_index, "ula_chain: non-finite iterate at step " +
                                            std::to_string(step_index));
  };

  ChainOutput out;
  out.samples.reserve(cfg.n_samples);
  for (int k = 0; k < cfg.n_burnin; ++k) advance();
  for (int s = 0; s < cfg.n_samples; ++s) {
    for (int t = 0; t < cfg.thinning; ++t) advance();
    out.samples.push_back(x);
    if (potential) out.potentials.push_back((*potential)(x));
  }
  out.n_steps = step_index;
  out.finalize_moments();
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

}  // namespace uqx
