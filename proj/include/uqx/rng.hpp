// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace uqx {

/// Deterministic random stream with hierarchical substream derivation.
///
/// A stream is identified by a 64-bit key. child(i) derives a new key by
/// hashing (key, i), so any (seed, path-of-indices) pair names the same
/// stream regardless of how much the parent has been consumed. All draws
/// are computed from integer arithmetic and libm calls only, which makes
/// chains bit-reproducible for a given platform and build.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Independent substream for index `idx`; does not disturb this stream.
  RngStream child(std::uint64_t idx) const;
  /// Substream addressed by a path of indices, root first.
  RngStream child_path(std::initializer_list<std::uint64_t> path) const;

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n);
  /// Standard normal (Box-Muller, pairwise cached).
  double normal();
  /// Gamma(shape, rate) via Marsaglia-Tsang; shape, rate > 0.
  double gamma(double shape, double rate);

 private:
  std::uint64_t key_;
  std::array<std::uint64_t, 4> state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace uqx
