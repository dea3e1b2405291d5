// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace uqx::cli {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;       // --out override
  std::string method;        // --method override
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

int run_audit_cmd(const CommonFlags& flags);
int run_sample_cmd(const CommonFlags& flags, const std::string& obs_path,
                   const std::string& truth_path);
int run_table_cmd(const std::vector<std::string>& report_paths,
                  const std::string& out_path);
int run_protocol_check_cmd(int n_frames, int n_fuzz, std::uint64_t seed);

}  // namespace uqx::cli
