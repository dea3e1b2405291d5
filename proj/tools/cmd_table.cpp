// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli_common.hpp"
#include "uqx/errors.hpp"
#include "uqx/report.hpp"

namespace uqx::cli {

int run_table_cmd(const std::vector<std::string>& report_paths,
                  const std::string& out_path) {
  std::vector<nlohmann::json> reports;
  for (const auto& path : report_paths) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report: " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw IoError("cannot parse " + path + ": " + e.what());
    }
    reports.push_back(std::move(j));
  }
  const std::string table = render_method_table(reports);
  if (out_path.empty()) {
    std::cout << table;
  } else {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot open for writing: " + out_path);
    out << table;
  }
  return 0;
}

}  // namespace uqx::cli
