// SPDX-License-Identifier: Apache-2.0
#include "uqx/dataset.hpp"

#include <algorithm>

#include "uqx/errors.hpp"
#include "uqx/image_io.hpp"

namespace uqx {

bool Dataset::uniform_dims() const {
  for (const auto& img : items)
    if (!img.same_shape(items.front())) return false;
  return true;
}

Dataset load_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw IoError("dataset path is not a directory: " + dir.string());

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

  Dataset ds;
  for (const auto& f : files) {
    try {
      Image img = read_image(f);
      if (!img.all_finite()) throw IoError("non-finite pixel values");
      ds.items.push_back(std::move(img));
      ds.labels.push_back(f.filename().string());
    } catch (const Error& e) {
      ds.warnings.push_back(f.filename().string() + ": " + e.what());
    }
  }
  if (ds.items.empty())
    throw IoError("no readable images in " + dir.string() +
                  (ds.warnings.empty() ? "" : " (" + std::to_string(ds.warnings.size()) +
                                                  " files skipped)"));
  return ds;
}

}  // namespace uqx
