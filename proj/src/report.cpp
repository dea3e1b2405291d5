// SPDX-License-Identifier: Apache-2.0
#include "uqx/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "uqx/errors.hpp"
#include "uqx/version.hpp"

namespace uqx {

using nlohmann::json;

namespace {

// Shortest round-trip decimal form, identical to the JSON serialisation.
std::string num(double v) { return json(v).dump(); }

std::string fmt1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out.good()) throw IoError("write failure: " + path.string());
}

}  // namespace

json report_to_json(const CoverageReport& report, const std::string& experiment,
                    const json& config_echo, bool include_timing) {
  json coverage = json::array();
  for (const auto& s : report.per_alpha) {
    coverage.push_back({{"alpha", s.alpha},
                        {"target", s.target},
                        {"observed", s.observed},
                        {"ell_hat", s.ell_hat},
                        {"misses", s.misses},
                        {"wilson_low", s.ell_wilson.low},
                        {"wilson_high", s.ell_wilson.high}});
  }
  json alphas = json::array();
  for (const auto& s : report.per_alpha) alphas.push_back(s.alpha);

  json j{{"schema", kReportSchema},
         {"version", report.version},
         {"experiment", experiment},
         {"method", report.method_label},
         {"region", report.region_kind},
         {"seed", report.seed},
         {"n_trials", report.n_trials},
         {"n_completed", report.n_completed},
         {"n_failed", report.n_failed},
         {"alphas", alphas},
         {"coverage", coverage},
         {"psnr",
          {{"estimate_mean", report.psnr_mean},
           {"estimate_std", report.psnr_std},
           {"observation_mean", report.psnr_obs_mean}}},
         {"config_echo", config_echo}};
  if (include_timing && report.mean_wall_ms.has_value())
    j["timing"] = {{"mean_wall_ms_per_trial", *report.mean_wall_ms}};
  else
    j["timing"] = nullptr;
  return j;
}

std::string render_report_csv(const CoverageReport& report, bool include_timing) {
  std::string out =
      "alpha,target_coverage,observed_coverage,ell_hat,wilson_low,wilson_high,misses,"
      "verdict\n";
  for (const auto& s : report.per_alpha) {
    Verdict v = Verdict::calibrated;
    if (s.ell_wilson.low > 0.0) v = Verdict::conservative;
    else if (s.ell_wilson.high < 0.0) v = Verdict::overconfident;
    out += num(s.alpha) + "," + num(s.target) + "," + num(s.observed) + "," +
           num(s.ell_hat) + "," + num(s.ell_wilson.low) + "," + num(s.ell_wilson.high) +
           "," + std::to_string(s.misses) + "," + verdict_name(v) + "\n";
  }
  out += "# n_trials=" + std::to_string(report.n_trials) +
         " n_completed=" + std::to_string(report.n_completed) +
         " n_failed=" + std::to_string(report.n_failed) + "\n";
  out += "# psnr_mean=" + num(report.psnr_mean) + " psnr_std=" + num(report.psnr_std) +
         " psnr_obs_mean=" + num(report.psnr_obs_mean) + "\n";
  if (include_timing && report.mean_wall_ms.has_value())
    out += "# mean_wall_ms_per_trial=" + num(*report.mean_wall_ms) + "\n";
  return out;
}

std::string render_coverage_curve_csv(const CoverageReport& report) {
  std::string out = "target_coverage,observed_coverage,ell_hat,wilson_low,wilson_high\n";
  // per_alpha is ascending in alpha, so walk backwards for ascending target.
  for (auto it = report.per_alpha.rbegin(); it != report.per_alpha.rend(); ++it)
    out += num(it->target) + "," + num(it->observed) + "," + num(it->ell_hat) + "," +
           num(it->ell_wilson.low) + "," + num(it->ell_wilson.high) + "\n";
  return out;
}

std::string render_trials_ndjson(const CoverageReport& report) {
  std::string out;
  for (const auto& t : report.trials) {
    json j{{"trial", t.trial},
           {"item_id", t.item_id},
           {"seed_path", t.seed_path},
           {"wall_ms", t.wall_ms}};
    if (t.failed) {
      j["failed"] = true;
      j["error"] = t.error;
    } else {
      j["psnr_mean"] = t.psnr_mean;
      j["psnr_obs"] = t.psnr_obs;
      json misses = json::array();
      for (auto m : t.misses) misses.push_back(static_cast<int>(m));
      j["misses"] = misses;
    }
    out += j.dump();
    out += "\n";
  }
  return out;
}

std::string render_method_table(const std::vector<json>& reports) {
  static const double kTargets[] = {0.80, 0.85, 0.90, 0.95, 0.975, 0.99, 0.999};
  std::string out;

  // Warn when the reports were produced under differing observation models.
  bool conflict = false;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto a = reports[i - 1].value("config_echo", json::object()).value("model", json::object());
    const auto b = reports[i].value("config_echo", json::object()).value("model", json::object());
    if (a != b) conflict = true;
  }
  if (conflict) out += "# warning: reports use differing observation models\n";

  out += "method, 80.0%, 85.0%, 90.0%, 95.0%, 97.5%, 99.0%, 99.9%, PSNR (dB), time (min)\n";
  for (const auto& r : reports) {
    std::string row = r.value("method", std::string("?"));
    for (double target : kTargets) {
      std::string cell;
      for (const auto& c : r.value("coverage", json::array())) {
        if (std::abs(c.value("target", -1.0) - target) < 1e-9) {
          cell = fmt1(100.0 * c.value("observed", 0.0)) + "%";
          break;
        }
      }
      row += ", " + cell;
    }
    const auto psnr = r.value("psnr", json::object());
    if (psnr.contains("estimate_mean"))
      row += ", " + fmt1(psnr.value("estimate_mean", 0.0)) + " \xC2\xB1 " +
             fmt1(psnr.value("estimate_std", 0.0));
    else
      row += ", ";
    const auto timing = r.value("timing", json());
    if (timing.is_object() && timing.contains("mean_wall_ms_per_trial"))
      row += ", " + fmt1(timing.value("mean_wall_ms_per_trial", 0.0) / 60000.0);
    else
      row += ", ";
    out += row + "\n";
  }
  return out;
}

ReportBundlePaths write_report_bundle(const CoverageReport& report,
                                      const std::string& experiment,
                                      const json& config_echo, bool include_timing,
                                      const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  ReportBundlePaths paths{out_dir / "report.json", out_dir / "report.csv",
                          out_dir / "coverage_curve.csv", out_dir / "trials.ndjson"};
  write_text(paths.report_json,
             report_to_json(report, experiment, config_echo, include_timing).dump(2) + "\n");
  write_text(paths.report_csv, render_report_csv(report, include_timing));
  write_text(paths.coverage_curve_csv, render_coverage_curve_csv(report));
  write_text(paths.trials_ndjson, render_trials_ndjson(report));
  return paths;
}

}  // namespace uqx
