// SPDX-License-Identifier: Apache-2.0
#include "uqx/image.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "uqx/errors.hpp"

namespace uqx {

Image::Image(int h, int w, double fill)
    : height(h), width(w), pixels(static_cast<std::size_t>(h) * w, fill) {
  if (h < 1 || w < 1)
    throw InvalidArgument("Image: dimensions must be at least 1x1, got " +
                          std::to_string(h) + "x" + std::to_string(w));
}

bool Image::all_finite() const {
  for (double v : pixels)
    if (!std::isfinite(v)) return false;
  return true;
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b))
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a.height) + "x" + std::to_string(a.width) +
                          " vs " + std::to_string(b.height) + "x" +
                          std::to_string(b.width) + ")");
}

double dot(const Image& a, const Image& b) {
  require_same_shape(a, b, "dot");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a.pixels[i] * b.pixels[i];
  return s;
}

double norm2sq(const Image& a) {
  double s = 0.0;
  for (double v : a.pixels) s += v * v;
  return s;
}

double norm2(const Image& a) { return std::sqrt(norm2sq(a)); }

double linf_diff(const Image& a, const Image& b) {
  require_same_shape(a, b, "linf_diff");
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.pixels[i] - b.pixels[i]));
  return m;
}

Image operator+(const Image& a, const Image& b) {
  require_same_shape(a, b, "operator+");
  Image out = a;
  for (int i = 0; i < a.size(); ++i) out.pixels[i] += b.pixels[i];
  return out;
}

Image operator-(const Image& a, const Image& b) {
  require_same_shape(a, b, "operator-");
  Image out = a;
  for (int i = 0; i < a.size(); ++i) out.pixels[i] -= b.pixels[i];
  return out;
}

Image operator*(double s, const Image& a) {
  Image out = a;
  for (double& v : out.pixels) v *= s;
  return out;
}

void axpy(Image& dst, double s, const Image& src) {
  require_same_shape(dst, src, "axpy");
  for (int i = 0; i < dst.size(); ++i) dst.pixels[i] += s * src.pixels[i];
}

}  // namespace uqx
