// SPDX-License-Identifier: Apache-2.0
#include "uqx/tv.hpp"

#include <cmath>
#include <limits>

#include "uqx/errors.hpp"

namespace uqx {

namespace {
constexpr double kDualStep = 1.0 / 8.0;  // 1 / ||D||^2 bound for 2-D differences
}  // namespace

void TvPotential::validate() const {
  if (!(lambda > 0.0)) throw InvalidArgument("TvPotential: lambda must be positive");
}

void tv_forward_diff(const Image& x, std::vector<double>& dh, std::vector<double>& dv) {
  const int h = x.height, w = x.width;
  for (int r = 0; r < h; ++r) {
    const int rn = r + 1 == h ? 0 : r + 1;
    for (int c = 0; c < w; ++c) {
      const int cn = c + 1 == w ? 0 : c + 1;
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      dh[i] = x.at(r, cn) - x.at(r, c);
      dv[i] = x.at(rn, c) - x.at(r, c);
    }
  }
}

void tv_adjoint(const std::vector<double>& ph, const std::vector<double>& pv, Image& out) {
  const int h = out.height, w = out.width;
  for (int r = 0; r < h; ++r) {
    const int rp = r == 0 ? h - 1 : r - 1;
    for (int c = 0; c < w; ++c) {
      const int cp = c == 0 ? w - 1 : c - 1;
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      out.pixels[i] = (ph[static_cast<std::size_t>(r) * w + cp] - ph[i]) +
                      (pv[static_cast<std::size_t>(rp) * w + c] - pv[i]);
    }
  }
}

double TvPotential::tv(const Image& x) {
  const int n = x.size();
  std::vector<double> dh(n), dv(n);
  tv_forward_diff(x, dh, dv);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::sqrt(dh[i] * dh[i] + dv[i] * dv[i]);
  return s;
}

TvProxResult TvPotential::prox(const Image& v, double theta, const TvDual* warm_start,
                               double gap_tol, int max_iter) const {
  validate();
  if (!(theta > 0.0)) throw InvalidArgument("tv_prox: theta must be positive");
  if (!(gap_tol > 0.0) || max_iter < 1)
    throw InvalidArgument("tv_prox: gap_tol and max_iter must be positive");
  const double weight = theta * lambda;
  const std::size_t n = static_cast<std::size_t>(v.size());

  TvProxResult res;
  if (weight < 1e-300) {
    res.u = v;
    res.converged = true;
    res.dual.ph.assign(n, 0.0);
    res.dual.pv.assign(n, 0.0);
    return res;
  }

  TvDual p;
  if (warm_start && !warm_start->empty() && warm_start->ph.size() == n) {
    p = *warm_start;
    // A warm start from a different weight may be infeasible; re-project.
    for (std::size_t i = 0; i < n; ++i) {
      const double norm = std::sqrt(p.ph[i] * p.ph[i] + p.pv[i] * p.pv[i]);
      if (norm > weight) {
        p.ph[i] *= weight / norm;
        p.pv[i] *= weight / norm;
      }
    }
  } else {
    p.ph.assign(n, 0.0);
    p.pv.assign(n, 0.0);
  }
  TvDual q = p;          // extrapolated point
  TvDual p_prev = p;
  double t = 1.0;

  Image u(v.height, v.width);
  Image residual(v.height, v.width);
  std::vector<double> gh(n), gv(n);

  TvDual best_p;
  double best_gap = std::numeric_limits<double>::infinity();
  Image best_u = v;
  int it = 0;

  for (it = 1; it <= max_iter; ++it) {
    // Gradient of (1/2)||D^T q - v||^2 at the extrapolated point.
    tv_adjoint(q.ph, q.pv, residual);
    for (std::size_t i = 0; i < n; ++i) residual.pixels[i] -= v.pixels[i];
    tv_forward_diff(residual, gh, gv);
    p_prev = p;
    for (std::size_t i = 0; i < n; ++i) {
      double nh = q.ph[i] - kDualStep * gh[i];
      double nv = q.pv[i] - kDualStep * gv[i];
      const double norm = std::sqrt(nh * nh + nv * nv);
      if (norm > weight) {
        nh *= weight / norm;
        nv *= weight / norm;
      }
      p.ph[i] = nh;
      p.pv[i] = nv;
    }
    // Adaptive restart: kill the momentum when it points against the step.
    double restart_test = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      restart_test += (q.ph[i] - p.ph[i]) * (p.ph[i] - p_prev.ph[i]) +
                      (q.pv[i] - p.pv[i]) * (p.pv[i] - p_prev.pv[i]);
    if (restart_test > 0.0) t = 1.0;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    for (std::size_t i = 0; i < n; ++i) {
      q.ph[i] = p.ph[i] + beta * (p.ph[i] - p_prev.ph[i]);
      q.pv[i] = p.pv[i] + beta * (p.pv[i] - p_prev.pv[i]);
    }
    t = t_next;

    // Duality gap at p: sum_i (weight*||(Du)_i|| - <p_i, (Du)_i>), u = v - D^T p.
    tv_adjoint(p.ph, p.pv, u);
    for (std::size_t i = 0; i < n; ++i) u.pixels[i] = v.pixels[i] - u.pixels[i];
    tv_forward_diff(u, gh, gv);
    double gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dnorm = std::sqrt(gh[i] * gh[i] + gv[i] * gv[i]);
      gap += weight * dnorm - (p.ph[i] * gh[i] + p.pv[i] * gv[i]);
    }
    if (gap < best_gap) {
      best_gap = gap;
      best_u = u;
      best_p = p;
    }
    if (gap <= gap_tol) break;
  }

  res.u = std::move(best_u);
  res.gap = best_gap;
  res.iterations = std::min(it, max_iter);
  res.converged = best_gap <= gap_tol;
  res.dual = std::move(best_p);
  return res;
}

}  // namespace uqx
