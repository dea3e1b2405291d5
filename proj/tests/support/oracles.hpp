// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations used only by tests. Everything here is
// deliberately naive (quadratic DFTs, nested-loop convolutions, dense linear
// algebra, plain projected gradient) so it shares no code path with the
// library implementations it checks.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "uqx/image.hpp"
#include "uqx/model.hpp"

namespace oracle {

// O(n^2) DFT, forward (unnormalised) or inverse (divides by n).
inline std::vector<std::complex<double>> dft_brute(
    const std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * 3.14159265358979323846 *
                         static_cast<double>(j * k % n) / static_cast<double>(n);
      s += a[j] * std::complex<double>{std::cos(ang), std::sin(ang)};
    }
    out[k] = inverse ? s / static_cast<double>(n) : s;
  }
  return out;
}

// Direct nested-loop circular convolution (true convolution, centre anchor).
inline uqx::Image conv_spatial_brute(const uqx::Image& x, const uqx::BlurKernel& k) {
  uqx::Image out(x.height, x.width, 0.0);
  const int cr = k.height / 2;
  const int cc = k.width / 2;
  for (int r = 0; r < x.height; ++r) {
    for (int c = 0; c < x.width; ++c) {
      double s = 0.0;
      for (int i = 0; i < k.height; ++i) {
        for (int j = 0; j < k.width; ++j) {
          const int rr = ((r - (i - cr)) % x.height + x.height) % x.height;
          const int cIdx = ((c - (j - cc)) % x.width + x.width) % x.width;
          s += k.at(i, j) * x.at(rr, cIdx);
        }
      }
      out.at(r, c) = s;
    }
  }
  return out;
}

// Central finite differences of a scalar field on images.
inline uqx::Image finite_diff_grad(const std::function<double(const uqx::Image&)>& f,
                                   const uqx::Image& x, double step = 1e-5) {
  uqx::Image g(x.height, x.width, 0.0);
  uqx::Image probe = x;
  for (int i = 0; i < x.size(); ++i) {
    const double v = x.pixels[i];
    probe.pixels[i] = v + step;
    const double fp = f(probe);
    probe.pixels[i] = v - step;
    const double fm = f(probe);
    probe.pixels[i] = v;
    g.pixels[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

// Dense Gaussian elimination with partial pivoting; A is n x n row-major.
inline std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
  const std::size_t n = b.size();
  if (A.size() != n * n) throw std::runtime_error("solve_dense: shape mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    const double d = A[col * n + col];
    if (d == 0.0) throw std::runtime_error("solve_dense: singular matrix");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r * n + col] / d;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) s -= A[ri * n + c] * x[c];
    x[ri] = s / A[ri * n + ri];
  }
  return x;
}

// Regularised lower incomplete gamma P(a, x), series + continued fraction.
inline double gammp(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::runtime_error("gammp: bad arguments");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Lentz continued fraction for Q(a, x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  const double q = std::exp(-x + a * std::log(x) - gln) * h;
  return 1.0 - q;
}

// Chi-square quantile via bisection on gammp.
inline double chi2_quantile(double dof, double p) {
  double lo = 0.0;
  double hi = dof + 200.0 * std::sqrt(2.0 * dof) + 200.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gammp(dof / 2.0, mid / 2.0) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Deterministic pseudo-random fill, independent of the library RNG.
inline void lcg_fill(uqx::Image& img, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::uint64_t s = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  for (double& v : img.pixels) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    v = lo + (hi - lo) * (static_cast<double>(s >> 11) * 0x1.0p-53);
  }
}

}  // namespace oracle
