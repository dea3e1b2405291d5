// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace uqx {

/// Fixed-size 2-D grid of real pixel intensities, nominal range [0, 1],
/// row-major. The common currency of all operators, samplers and regions.
struct Image {
  int height = 0;
  int width = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(int h, int w, double fill = 0.0);

  double& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
  double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }

  int size() const { return height * width; }
  bool same_shape(const Image& o) const { return height == o.height && width == o.width; }
  bool all_finite() const;
};

void require_same_shape(const Image& a, const Image& b, const char* what);

double dot(const Image& a, const Image& b);
double norm2sq(const Image& a);
double norm2(const Image& a);
double linf_diff(const Image& a, const Image& b);

Image operator+(const Image& a, const Image& b);
Image operator-(const Image& a, const Image& b);
Image operator*(double s, const Image& a);

/// dst += s * src
void axpy(Image& dst, double s, const Image& src);

}  // namespace uqx
