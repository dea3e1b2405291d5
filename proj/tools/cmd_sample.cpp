// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "cli_common.hpp"
#include "uqx/audit.hpp"
#include "uqx/config.hpp"
#include "uqx/errors.hpp"
#include "uqx/image_io.hpp"
#include "uqx/methods.hpp"

namespace uqx::cli {

namespace {

// Tiles up to 16 evenly spaced samples into one image with 1px separators.
Image contact_sheet(const std::vector<Image>& samples) {
  const int k = static_cast<int>(std::min<std::size_t>(16, samples.size()));
  const int cols = k <= 4 ? k : 4;
  const int rows = (k + cols - 1) / cols;
  const int h = samples.front().height, w = samples.front().width;
  Image sheet(rows * h + (rows - 1), cols * w + (cols - 1), 1.0);
  for (int i = 0; i < k; ++i) {
    const std::size_t pick = samples.size() <= 16
                                 ? static_cast<std::size_t>(i)
                                 : i * (samples.size() - 1) / (k - 1);
    const Image& s = samples[pick];
    const int r0 = (i / cols) * (h + 1);
    const int c0 = (i % cols) * (w + 1);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) sheet.at(r0 + r, c0 + c) = s.at(r, c);
  }
  return sheet;
}

}  // namespace

int run_sample_cmd(const CommonFlags& flags, const std::string& obs_path,
                   const std::string& truth_path) {
  RunConfig cfg = load_run_config(flags.config_path);
  if (!flags.method.empty()) cfg.method = flags.method;
  if (flags.seed_set) cfg.seed = flags.seed;
  if (const char* env = std::getenv("UQX_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
  if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;

  const Image y = read_image(obs_path);
  Image truth;
  const bool have_truth = !truth_path.empty();
  if (have_truth) {
    truth = read_image(truth_path);
    if (!truth.same_shape(y))
      throw InvalidArgument("ground truth and observation dimensions differ");
  }

  ObservationModel model;
  if (cfg.has_sigma) {
    Dataset dummy;
    dummy.items.push_back(y);
    model = build_model(cfg, dummy);  // kernel preset + explicit sigma
  } else {
    if (!have_truth)
      throw ConfigError({"[model] bsnr_db: sampling from a single observation needs "
                         "either an explicit sigma or --truth to derive it"});
    Dataset one;
    one.items.push_back(truth);
    model = build_model(cfg, one);
  }

  const BuiltMethod method = build_method(cfg, model, y.height, y.width);
  MethodRun run = method.factory(y, RngStream(cfg.seed));

  std::filesystem::create_directories(cfg.output_dir);
  const auto mean_path = std::filesystem::path(cfg.output_dir) / "mean.png";
  const auto sheet_path = std::filesystem::path(cfg.output_dir) / "samples.png";
  write_png16(mean_path, run.chain.mean);
  write_png16(sheet_path, contact_sheet(run.chain.samples));

  for (const auto& [key, value] : run.info) std::printf("%s=%g\n", key.c_str(), value);
  if (have_truth) std::printf("psnr=%.4f\n", psnr(truth, run.chain.mean));
  std::printf("mean: %s\nsamples: %s\n", mean_path.string().c_str(),
              sheet_path.string().c_str());
  return 0;
}

}  // namespace uqx::cli
