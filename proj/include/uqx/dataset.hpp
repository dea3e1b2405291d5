// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "uqx/image.hpp"

namespace uqx {

/// Ordered collection of test images with their provenance labels.
struct Dataset {
  std::vector<Image> items;
  std::vector<std::string> labels;
  std::vector<std::string> warnings;  // per-file skip reasons

  bool uniform_dims() const;
};

/// Loads every supported image file (.png, .pgm) in a directory, sorted by
/// file name. Unreadable files are skipped with a warning; an empty result
/// is an error.
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace uqx
