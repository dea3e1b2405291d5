// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uqx/dataset.hpp"
#include "uqx/model.hpp"
#include "uqx/regions.hpp"
#include "uqx/stats.hpp"

namespace uqx {

enum class TrialSampling { cyclic, with_replacement };

struct AuditConfig {
  std::vector<double> alphas;  // strictly increasing, all in (0,1)
  int n_trials = 1;
  RegionKind region = RegionKind::ball;
  TrialSampling sampling = TrialSampling::cyclic;
  std::uint64_t seed = 0;
  int threads = 0;                      // <= 0: hardware count
  double max_failure_fraction = 0.05;   // more than this aborts the audit
  double wilson_level = 0.95;

  void validate() const;
};

/// One chain run plus the model's potential evaluator (see D17: constants
/// only ever compared within this one chain). `potential` may be empty.
struct MethodRun {
  ChainOutput chain;
  PotentialFn potential;
  std::vector<std::pair<std::string, double>> info;  // e.g. {"lambda_hat", ...}
};

/// Produces one posterior chain for an observation; rng is the trial's
/// dedicated substream.
using SamplerFactory = std::function<MethodRun(const Image& y, RngStream rng)>;

struct TrialRecord {
  int trial = 0;
  std::string item_id;
  std::vector<std::uint64_t> seed_path;
  std::vector<std::uint8_t> misses;  // one 0/1 flag per alpha, non-decreasing
  double psnr_mean = 0.0;            // posterior mean vs truth
  double psnr_obs = 0.0;             // observation vs truth
  double wall_ms = 0.0;
  bool failed = false;
  std::string error;
};

struct AlphaStat {
  double alpha = 0.0;
  double target = 0.0;    // 1 - alpha
  double observed = 0.0;  // 1 - misses/N
  double ell_hat = 0.0;   // alpha - misses/N
  std::int64_t misses = 0;
  Interval ell_wilson;    // Wilson interval mapped onto ell_hat
};

struct CoverageReport {
  std::vector<AlphaStat> per_alpha;
  int n_trials = 0;     // requested
  int n_completed = 0;  // excluding failures
  int n_failed = 0;
  double psnr_mean = 0.0;
  double psnr_std = 0.0;
  double psnr_obs_mean = 0.0;
  std::optional<double> mean_wall_ms;  // unset when timing is suppressed
  std::uint64_t seed = 0;
  std::string method_label;
  std::string region_kind;
  std::string version;
  std::vector<TrialRecord> trials;

  const AlphaStat& at_alpha(double alpha) const;
};

/// Algorithm-1 Monte Carlo coverage audit. One chain per trial serves the
/// whole alpha grid; fresh observation noise is drawn per trial even when a
/// dataset item recurs. Diverged chains are excluded and counted; more than
/// max_failure_fraction failing aborts with AuditError.
CoverageReport run_audit(const Dataset& dataset, const SamplerFactory& factory,
                         const ObservationModel& m, const AuditConfig& cfg);

enum class Verdict { conservative, overconfident, calibrated };

/// Conservative if the Wilson interval for ell_hat lies above 0,
/// overconfident if below, calibrated if it covers 0.
Verdict classify(const CoverageReport& report, double alpha);

const char* verdict_name(Verdict v);

}  // namespace uqx
