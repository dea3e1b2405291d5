// SPDX-License-Identifier: Apache-2.0
#include "uqx/audit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "uqx/errors.hpp"
#include "uqx/parallel.hpp"
#include "uqx/version.hpp"

namespace uqx {

namespace {
// Substream labels under the master seed.
constexpr std::uint64_t kShuffleStream = 0;
constexpr std::uint64_t kTrialStream = 1;
// Per-trial sub-labels.
constexpr std::uint64_t kItemPick = 0;
constexpr std::uint64_t kNoise = 1;
constexpr std::uint64_t kChain = 2;
}  // namespace

void AuditConfig::validate() const {
  if (alphas.empty()) throw InvalidArgument("AuditConfig: alpha grid is empty");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] < 1.0))
      throw InvalidArgument("AuditConfig: alphas must be in (0,1)");
    if (i > 0 && !(alphas[i] > alphas[i - 1]))
      throw InvalidArgument("AuditConfig: alphas must be strictly increasing");
  }
  if (n_trials < 1) throw InvalidArgument("AuditConfig: n_trials must be >= 1");
  if (!(max_failure_fraction >= 0.0 && max_failure_fraction < 1.0))
    throw InvalidArgument("AuditConfig: max_failure_fraction must be in [0,1)");
  if (!(wilson_level > 0.0 && wilson_level < 1.0))
    throw InvalidArgument("AuditConfig: wilson_level must be in (0,1)");
}

const AlphaStat& CoverageReport::at_alpha(double alpha) const {
  for (const auto& s : per_alpha)
    if (std::abs(s.alpha - alpha) < 1e-9) return s;
  throw InvalidArgument("CoverageReport: alpha " + std::to_string(alpha) +
                        " is not in the report grid");
}

CoverageReport run_audit(const Dataset& dataset, const SamplerFactory& factory,
                         const ObservationModel& m, const AuditConfig& cfg) {
  cfg.validate();
  m.validate();
  if (dataset.items.empty()) throw InvalidArgument("run_audit: empty dataset");
  if (!dataset.uniform_dims())
    throw InvalidArgument("run_audit: dataset images must share dimensions");

  const std::size_t n_items = dataset.items.size();
  RngStream root(cfg.seed);

  // Cyclic traversal of a shuffled item order (D18).
  std::vector<std::size_t> order(n_items);
  std::iota(order.begin(), order.end(), std::size_t{0});
  {
    RngStream shuffle_rng = root.child(kShuffleStream);
    for (std::size_t i = n_items; i > 1; --i) {
      const std::size_t j = shuffle_rng.uniform_below(i);
      std::swap(order[i - 1], order[j]);
    }
  }

  std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.n_trials));
  parallel_for(cfg.n_trials, cfg.threads, [&](long t) {
    const auto t0 = std::chrono::steady_clock::now();
    RngStream trial_rng = root.child(kTrialStream).child(static_cast<std::uint64_t>(t));

    std::size_t item;
    if (cfg.sampling == TrialSampling::cyclic) {
      item = order[static_cast<std::size_t>(t) % n_items];
    } else {
      RngStream pick = trial_rng.child(kItemPick);
      item = pick.uniform_below(n_items);
    }
    const Image& truth = dataset.items[item];

    TrialRecord rec;
    rec.trial = static_cast<int>(t);
    rec.item_id = item < dataset.labels.size() ? dataset.labels[item] : std::to_string(item);
    rec.seed_path = {kTrialStream, static_cast<std::uint64_t>(t)};
    rec.misses.assign(cfg.alphas.size(), 0);
    try {
      RngStream noise_rng = trial_rng.child(kNoise);
      const Image y = sample_observation(truth, m, noise_rng);  // fresh noise (D21)
      MethodRun run = factory(y, trial_rng.child(kChain));
      if (run.chain.samples.empty())
        throw AuditError("sampler produced no samples");

      if (cfg.region == RegionKind::hpd) {
        if (run.chain.potentials.empty() || !run.potential)
          throw UnsupportedRegion(
              "HPD regions require a sampler with evaluable potentials");
        const double u_truth = run.potential(truth);
        for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
          const double gamma = hpd_threshold(run.chain.potentials, cfg.alphas[a]);
          rec.misses[a] = u_truth >= gamma ? 0 : 1;
        }
      } else {
        for (std::size_t a = 0; a < cfg.alphas.size(); ++a)
          rec.misses[a] = ball_from_chain(run.chain.samples, cfg.alphas[a]).contains(truth)
                              ? 0
                              : 1;
      }
      rec.psnr_mean = psnr(truth, run.chain.mean);
      rec.psnr_obs = psnr(truth, y);
    } catch (const DivergedChain& e) {
      rec.failed = true;
      rec.error = e.what();
    }
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    records[static_cast<std::size_t>(t)] = std::move(rec);
  });

  CoverageReport report;
  report.trials = std::move(records);
  report.n_trials = cfg.n_trials;
  report.seed = cfg.seed;
  report.region_kind = cfg.region == RegionKind::hpd ? "hpd" : "ball";
  report.version = kVersion;

  double psnr_sum = 0.0, psnr_sumsq = 0.0, psnr_obs_sum = 0.0, wall_sum = 0.0;
  std::vector<std::int64_t> miss_count(cfg.alphas.size(), 0);
  for (const auto& rec : report.trials) {
    if (rec.failed) {
      ++report.n_failed;
      continue;
    }
    ++report.n_completed;
    psnr_sum += rec.psnr_mean;
    psnr_sumsq += rec.psnr_mean * rec.psnr_mean;
    psnr_obs_sum += rec.psnr_obs;
    wall_sum += rec.wall_ms;
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) miss_count[a] += rec.misses[a];
  }
  if (report.n_failed > cfg.max_failure_fraction * cfg.n_trials)
    throw AuditError(std::to_string(report.n_failed) + " of " +
                     std::to_string(cfg.n_trials) +
                     " trials diverged, exceeding the failure budget");
  if (report.n_completed == 0) throw AuditError("no completed trials");

  const double nc = static_cast<double>(report.n_completed);
  report.psnr_mean = psnr_sum / nc;
  report.psnr_std =
      nc > 1.0 ? std::sqrt(std::max(0.0, (psnr_sumsq - psnr_sum * psnr_sum / nc) / (nc - 1.0)))
               : 0.0;
  report.psnr_obs_mean = psnr_obs_sum / nc;
  report.mean_wall_ms = wall_sum / nc;

  for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
    AlphaStat s;
    s.alpha = cfg.alphas[a];
    s.target = 1.0 - s.alpha;
    s.misses = miss_count[a];
    const double miss_frac = static_cast<double>(s.misses) / nc;
    s.observed = 1.0 - miss_frac;
    s.ell_hat = s.alpha - miss_frac;
    const Interval miss_iv =
        wilson_interval(s.misses, report.n_completed, cfg.wilson_level);
    s.ell_wilson = Interval{s.alpha - miss_iv.high, s.alpha - miss_iv.low};
    report.per_alpha.push_back(s);
  }
  return report;
}

Verdict classify(const CoverageReport& report, double alpha) {
  const AlphaStat& s = report.at_alpha(alpha);
  if (s.ell_wilson.low > 0.0) return Verdict::conservative;
  if (s.ell_wilson.high < 0.0) return Verdict::overconfident;
  return Verdict::calibrated;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::conservative: return "conservative";
    case Verdict::overconfident: return "overconfident";
    case Verdict::calibrated: return "calibrated";
  }
  return "unknown";
}

}  // namespace uqx
