// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "uqx/audit.hpp"

namespace uqx {

/// Canonical machine-readable report. Serialisation is deterministic (keys
/// sorted, shortest round-trip numbers), so identical audits yield
/// byte-identical JSON. Wall-clock timing is included only when
/// `include_timing` is set; everything else is a pure function of
/// (dataset, config, seed).
nlohmann::json report_to_json(const CoverageReport& report, const std::string& experiment,
                              const nlohmann::json& config_echo, bool include_timing);

/// Human-readable per-alpha table with summary lines.
std::string render_report_csv(const CoverageReport& report, bool include_timing);

/// Plot series: "target_coverage,observed_coverage,ell_hat,wilson_low,
/// wilson_high", rows strictly increasing in target coverage.
std::string render_coverage_curve_csv(const CoverageReport& report);

/// One line-delimited JSON record per trial (always carries wall_ms).
std::string render_trials_ndjson(const CoverageReport& report);

/// Merged method table in the layout of the paper's coverage table: one row
/// per report, columns for targets {80, 85, 90, 95, 97.5, 99, 99.9}%, then
/// PSNR and time. Missing alphas render as blank cells; conflicting
/// observation models add a warning banner.
std::string render_method_table(const std::vector<nlohmann::json>& reports);

struct ReportBundlePaths {
  std::filesystem::path report_json;
  std::filesystem::path report_csv;
  std::filesystem::path coverage_curve_csv;
  std::filesystem::path trials_ndjson;
};

/// Writes report.json, report.csv, coverage_curve.csv and trials.ndjson.
ReportBundlePaths write_report_bundle(const CoverageReport& report,
                                      const std::string& experiment,
                                      const nlohmann::json& config_echo,
                                      bool include_timing,
                                      const std::filesystem::path& out_dir);

}  // namespace uqx
