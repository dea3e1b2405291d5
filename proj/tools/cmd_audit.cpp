// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "cli_common.hpp"
#include "uqx/audit.hpp"
#include "uqx/config.hpp"
#include "uqx/errors.hpp"
#include "uqx/methods.hpp"
#include "uqx/report.hpp"

namespace uqx::cli {

namespace {

RunConfig load_with_overrides(const CommonFlags& flags) {
  RunConfig cfg = load_run_config(flags.config_path);
  if (!flags.method.empty()) cfg.method = flags.method;
  if (flags.seed_set) cfg.seed = flags.seed;
  if (const char* env = std::getenv("UQX_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
  if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
  return cfg;
}

}  // namespace

int run_audit_cmd(const CommonFlags& flags) {
  const RunConfig cfg = load_with_overrides(flags);
  Dataset ds = build_dataset(cfg);
  for (const auto& warning : ds.warnings) std::cerr << "warning: " << warning << "\n";
  const ObservationModel model = build_model(cfg, ds);
  const BuiltMethod method =
      build_method(cfg, model, ds.items.front().height, ds.items.front().width);
  if (cfg.region == "hpd" && !method.supports_hpd)
    throw ConfigError({"[audit] region: hpd requires a sampler with evaluable "
                       "potentials; method '" +
                       cfg.method + "' cannot provide them"});

  AuditConfig acfg;
  acfg.alphas = cfg.alphas;
  acfg.n_trials = cfg.n_trials;
  acfg.region = cfg.region == "hpd" ? RegionKind::hpd : RegionKind::ball;
  acfg.sampling = cfg.sampling == "cyclic" ? TrialSampling::cyclic
                                           : TrialSampling::with_replacement;
  acfg.seed = cfg.seed;
  acfg.threads = flags.threads;

  CoverageReport report = run_audit(ds, method.factory, model, acfg);
  report.method_label = method.label;

  const auto paths =
      write_report_bundle(report, cfg.name, config_echo(cfg), cfg.timing, cfg.output_dir);

  std::printf("method=%s region=%s trials=%d completed=%d failed=%d sigma=%g\n",
              cfg.method.c_str(), report.region_kind.c_str(), report.n_trials,
              report.n_completed, report.n_failed, model.noise_sigma);
  for (const auto& s : report.per_alpha) {
    Verdict v = classify(report, s.alpha);
    std::printf("alpha=%-7g target=%.3f observed=%.4f ell_hat=%+.4f [%+.4f, %+.4f] %s\n",
                s.alpha, s.target, s.observed, s.ell_hat, s.ell_wilson.low,
                s.ell_wilson.high, verdict_name(v));
  }
  std::printf("psnr_mean=%.2f±%.2f psnr_obs=%.2f\n", report.psnr_mean, report.psnr_std,
              report.psnr_obs_mean);
  std::printf("report: %s\n", paths.report_json.string().c_str());
  return 0;
}

}  // namespace uqx::cli
