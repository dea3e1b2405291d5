// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <vector>

#include "cli_common.hpp"
#include "uqx/config.hpp"
#include "uqx/errors.hpp"
#include "uqx/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"uqx - frequentist coverage audits for Bayesian imaging methods"};
  app.set_version_flag("--version", std::string(uqx::kVersion));
  app.require_subcommand(1);
  app.footer(uqx::config_reference());

  uqx::cli::CommonFlags flags;

  auto add_common = [&flags](CLI::App* cmd, bool config_required) {
    cmd->add_option("--config", flags.config_path, "run configuration file")
        ->required(config_required);
    cmd->add_option("--out", flags.out_dir, "output directory (overrides config and env)");
    cmd->add_option("--method", flags.method, "method name (overrides config)");
    cmd->add_option("--seed", flags.seed, "master seed (overrides config)")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
  };

  CLI::App* audit = app.add_subcommand("audit", "run the Monte Carlo coverage audit");
  add_common(audit, true);

  CLI::App* sample =
      app.add_subcommand("sample", "run one chain on a single observation image");
  add_common(sample, true);
  std::string obs_path, truth_path;
  sample->add_option("--obs", obs_path, "observation image (png/pgm)")->required();
  sample->add_option("--truth", truth_path, "ground-truth image for PSNR");

  CLI::App* table =
      app.add_subcommand("table", "merge report.json files into a method table");
  std::vector<std::string> report_paths;
  std::string table_out;
  table->add_option("reports", report_paths, "report.json paths")->required();
  table->add_option("--out", table_out, "write the table here instead of stdout");

  CLI::App* pcheck =
      app.add_subcommand("protocol-check", "loopback self-test of the frame protocol");
  int n_frames = 1000, n_fuzz = 100;
  std::uint64_t pseed = 1;
  pcheck->add_option("--frames", n_frames, "round-trip frames (default 1000)");
  pcheck->add_option("--fuzz", n_fuzz, "malformed frames (default 100)");
  pcheck->add_option("--seed", pseed, "fuzzer seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*audit) return uqx::cli::run_audit_cmd(flags);
    if (*sample) return uqx::cli::run_sample_cmd(flags, obs_path, truth_path);
    if (*table) return uqx::cli::run_table_cmd(report_paths, table_out);
    if (*pcheck) return uqx::cli::run_protocol_check_cmd(n_frames, n_fuzz, pseed);
  } catch (const uqx::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
