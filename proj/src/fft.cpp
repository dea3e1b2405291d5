// SPDX-License-Identifier: Apache-2.0
#include "uqx/fft.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "uqx/errors.hpp"

namespace uqx {
namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Precomputed tables for one transform length.
struct Plan {
  std::size_t n = 0;
  // pow2 path
  std::vector<std::size_t> bitrev;
  std::vector<cdouble> roots;  // e^{-2pi i j / n}, j < n/2
  // Bluestein path (n not a power of two)
  std::size_t m = 0;                 // padded pow2 length
  std::vector<cdouble> chirp;        // e^{-i pi j^2 / n}, j < n
  std::vector<cdouble> chirp_fft;    // FFT_m of the wrapped conjugate chirp
};

void make_pow2_tables(Plan& p) {
  const std::size_t n = p.n;
  p.bitrev.assign(n, 0);
  std::size_t log2n = 0;
  while ((std::size_t{1} << log2n) < n) ++log2n;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < log2n; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
    p.bitrev[i] = r;
  }
  p.roots.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double ang = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    p.roots[j] = {std::cos(ang), std::sin(ang)};
  }
}

void fft_pow2(const Plan& p, std::vector<cdouble>& a, bool inverse) {
  const std::size_t n = p.n;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = p.bitrev[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cdouble w = p.roots[k * stride];
        if (inverse) w = std::conj(w);
        const cdouble u = a[start + k];
        const cdouble t = w * a[start + k + half];
        a[start + k] = u + t;
        a[start + k + half] = u - t;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : a) v *= inv;
  }
}

const Plan& plan_pow2(std::size_t n);

void make_bluestein_tables(Plan& p) {
  const std::size_t n = p.n;
  p.m = next_pow2(2 * n - 1);
  p.chirp.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    // j^2 mod 2n keeps the angle argument small for large n.
    const std::uint64_t jj = (static_cast<std::uint64_t>(j) * j) % (2 * n);
    const double ang = -kPi * static_cast<double>(jj) / static_cast<double>(n);
    p.chirp[j] = {std::cos(ang), std::sin(ang)};
  }
  std::vector<cdouble> b(p.m, cdouble{0.0, 0.0});
  b[0] = std::conj(p.chirp[0]);
  for (std::size_t j = 1; j < n; ++j) {
    b[j] = std::conj(p.chirp[j]);
    b[p.m - j] = std::conj(p.chirp[j]);
  }
  const Plan& inner = plan_pow2(p.m);
  fft_pow2(inner, b, false);
  p.chirp_fft = std::move(b);
}

void fft_bluestein(const Plan& p, std::vector<cdouble>& a, bool inverse) {
  const std::size_t n = p.n;
  if (inverse) {
    for (auto& v : a) v = std::conj(v);
    fft_bluestein(p, a, false);
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : a) v = std::conj(v) * inv;
    return;
  }
  std::vector<cdouble> q(p.m, cdouble{0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) q[j] = a[j] * p.chirp[j];
  const Plan& inner = plan_pow2(p.m);
  fft_pow2(inner, q, false);
  for (std::size_t j = 0; j < p.m; ++j) q[j] *= p.chirp_fft[j];
  fft_pow2(inner, q, true);
  for (std::size_t k = 0; k < n; ++k) a[k] = q[k] * p.chirp[k];
}

// Plans are cached per thread; chains in parallel audit trials never share.
std::unordered_map<std::size_t, Plan>& plan_cache() {
  thread_local std::unordered_map<std::size_t, Plan> cache;
  return cache;
}

const Plan& plan_pow2(std::size_t n) {
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it == cache.end()) {
    Plan p;
    p.n = n;
    make_pow2_tables(p);
    it = cache.emplace(n, std::move(p)).first;
  }
  return it->second;
}

const Plan& plan_for(std::size_t n) {
  if (is_pow2(n)) return plan_pow2(n);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it == cache.end()) {
    Plan p;
    p.n = n;
    make_bluestein_tables(p);
    it = cache.emplace(n, std::move(p)).first;
  }
  return it->second;
}

}  // namespace

void fft_inplace(std::vector<cdouble>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0) throw InvalidArgument("fft: empty input");
  if (n == 1) return;
  const Plan& p = plan_for(n);
  if (is_pow2(n))
    fft_pow2(p, a, inverse);
  else
    fft_bluestein(p, a, inverse);
}

namespace {

// Rows then columns; `inverse` applies 1/n per axis so the round trip is id.
void fft2_axes(std::vector<cdouble>& data, int h, int w, bool inverse) {
  std::vector<cdouble> row(static_cast<std::size_t>(w));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) row[c] = data[static_cast<std::size_t>(r) * w + c];
    fft_inplace(row, inverse);
    for (int c = 0; c < w; ++c) data[static_cast<std::size_t>(r) * w + c] = row[c];
  }
  std::vector<cdouble> col(static_cast<std::size_t>(h));
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) col[r] = data[static_cast<std::size_t>(r) * w + c];
    fft_inplace(col, inverse);
    for (int r = 0; r < h; ++r) data[static_cast<std::size_t>(r) * w + c] = col[r];
  }
}

}  // namespace

Spectrum fft2(const Image& x) {
  Spectrum out(static_cast<std::size_t>(x.size()));
  for (int i = 0; i < x.size(); ++i) out[i] = cdouble{x.pixels[i], 0.0};
  fft2_axes(out, x.height, x.width, false);
  return out;
}

Image ifft2_real(const Spectrum& freq, int height, int width) {
  if (static_cast<std::size_t>(height) * width != freq.size())
    throw InvalidArgument("ifft2_real: size mismatch");
  Spectrum tmp = freq;
  fft2_axes(tmp, height, width, true);
  Image out(height, width);
  for (int i = 0; i < out.size(); ++i) out.pixels[i] = tmp[i].real();
  return out;
}

Spectrum fft2_complex(const Spectrum& freq_in, int height, int width, bool inverse) {
  if (static_cast<std::size_t>(height) * width != freq_in.size())
    throw InvalidArgument("fft2_complex: size mismatch");
  Spectrum tmp = freq_in;
  fft2_axes(tmp, height, width, inverse);
  return tmp;
}

}  // namespace uqx
