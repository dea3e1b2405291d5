// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace uqx {

/// Declarative run configuration, parsed from a sectioned key=value file.
/// Unknown sections or keys are validation errors; validation reports every
/// violation, not just the first.
struct RunConfig {
  // [experiment]
  std::string name = "experiment";
  std::string output_dir = "out";
  bool timing = false;  // include wall-clock aggregates in report.json

  // [dataset]
  std::string dataset_source = "synthetic-gaussian";  // or "directory"
  std::string dataset_path;
  int synth_height = 16;
  int synth_width = 16;
  int synth_count = 100;
  std::string synth_prior = "smooth";  // smooth | iid
  double synth_scale = 1.0;            // iid variance or smooth-field scale
  double synth_ridge = 0.1;
  double synth_mean = 0.0;
  double synth_tail_dof = 0.0;  // > 0: heavier-tailed scale mixture (Student-t)
  std::uint64_t synth_seed = 1;

  // [model]
  std::string kernel = "uniform3";  // uniform3 | uniform5 | identity
  double bsnr_db = 0.0;
  double sigma = 0.0;
  bool has_bsnr = false;
  bool has_sigma = false;

  // [method]
  std::string method;  // exact-gaussian|gibbs-gmrf|tv-sapg|crr|pnp-ula|external
  std::map<std::string, std::string> method_params;

  // [audit]
  std::vector<double> alphas;  // default grid when empty
  int n_trials = 100;
  std::string region = "ball";      // ball | hpd
  std::string sampling = "cyclic";  // cyclic | with-replacement
  std::uint64_t seed = 0;

  static std::vector<double> default_alpha_grid();
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Normalised echo of the statistically meaningful configuration; excludes
/// the output directory and anything execution-environment specific.
nlohmann::json config_echo(const RunConfig& cfg);

/// Documentation of every key and its default, for --help.
std::string config_reference();

}  // namespace uqx
