// SPDX-License-Identifier: Apache-2.0
#include "uqx/crr.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "uqx/errors.hpp"
#include "uqx/fft.hpp"

static_assert(std::endian::native == std::endian::little,
              "CRR weight files assume a little-endian host");

namespace uqx {

PwQuadActivation::PwQuadActivation(double knot_origin, double spacing,
                                   std::vector<double> derivs)
    : origin_(knot_origin), spacing_(spacing), derivs_(std::move(derivs)) {
  if (!(spacing_ > 0.0)) throw InvalidModel("activation: knot spacing must be positive");
  if (derivs_.empty()) throw InvalidModel("activation: needs at least one knot");
  if (!monotone(derivs_))
    throw InvalidModel("activation: derivative knots must be non-decreasing");
  cumulative_.assign(derivs_.size(), 0.0);
  for (std::size_t j = 1; j < derivs_.size(); ++j)
    cumulative_[j] = cumulative_[j - 1] + 0.5 * (derivs_[j - 1] + derivs_[j]) * spacing_;
  const double last = origin_ + spacing_ * static_cast<double>(derivs_.size() - 1);
  const double anchor = std::min(std::max(0.0, origin_), last);
  anchor_offset_ = 0.0;
  anchor_offset_ = raw_value(anchor);
}

bool PwQuadActivation::monotone(const std::vector<double>& derivs, double tol) {
  for (std::size_t j = 1; j < derivs.size(); ++j)
    if (derivs[j] < derivs[j - 1] - tol) return false;
  return true;
}

double PwQuadActivation::deriv(double t) const {
  const std::size_t k = derivs_.size();
  if (k == 1) return derivs_[0];
  const double pos = (t - origin_) / spacing_;
  if (pos <= 0.0) {
    const double s0 = (derivs_[1] - derivs_[0]) / spacing_;
    return derivs_[0] + s0 * (t - origin_);
  }
  if (pos >= static_cast<double>(k - 1)) {
    const double sl = (derivs_[k - 1] - derivs_[k - 2]) / spacing_;
    const double tl = origin_ + spacing_ * static_cast<double>(k - 1);
    return derivs_[k - 1] + sl * (t - tl);
  }
  const auto j = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(j);
  return derivs_[j] + (derivs_[j + 1] - derivs_[j]) * frac;
}

double PwQuadActivation::raw_value(double t) const {
  const std::size_t k = derivs_.size();
  if (k == 1) return derivs_[0] * (t - origin_);
  const double last = origin_ + spacing_ * static_cast<double>(k - 1);
  if (t <= origin_) {
    const double s0 = (derivs_[1] - derivs_[0]) / spacing_;
    const double dt = t - origin_;
    return derivs_[0] * dt + 0.5 * s0 * dt * dt;
  }
  if (t >= last) {
    const double sl = (derivs_[k - 1] - derivs_[k - 2]) / spacing_;
    const double dt = t - last;
    return cumulative_[k - 1] + derivs_[k - 1] * dt + 0.5 * sl * dt * dt;
  }
  const double pos = (t - origin_) / spacing_;
  const auto j = static_cast<std::size_t>(pos);
  const double tj = origin_ + spacing_ * static_cast<double>(j);
  const double sj = (derivs_[j + 1] - derivs_[j]) / spacing_;
  const double dt = t - tj;
  return cumulative_[j] + derivs_[j] * dt + 0.5 * sj * dt * dt;
}

double PwQuadActivation::value(double t) const { return raw_value(t) - anchor_offset_; }

double PwQuadActivation::deriv_lipschitz() const {
  const std::size_t k = derivs_.size();
  if (k == 1) return 0.0;
  double lip = 0.0;
  for (std::size_t j = 1; j < k; ++j)
    lip = std::max(lip, (derivs_[j] - derivs_[j - 1]) / spacing_);
  return lip;
}

void CrrModel::validate() const {
  if (filters.empty()) throw InvalidModel("CrrModel: needs at least one filter");
  if (filters.size() != activations.size())
    throw InvalidModel("CrrModel: filter/activation count mismatch");
  if (!(lambda > 0.0)) throw InvalidModel("CrrModel: lambda must be positive");
  for (const auto& f : filters)
    if (f.height % 2 == 0 || f.width % 2 == 0)
      throw InvalidModel("CrrModel: filter sides must be odd");
}

namespace {

// Direct circular cross-correlation-style application for small kernels.
// flip=false applies W (convolution with the stored taps); flip=true applies
// the adjoint W^T.
void apply_filter(const Image& x, const Image& k, bool flip, Image& out) {
  const int h = x.height, w = x.width;
  const int cr = k.height / 2, cc = k.width / 2;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double s = 0.0;
      for (int i = 0; i < k.height; ++i) {
        for (int j = 0; j < k.width; ++j) {
          const int di = flip ? (cr - i) : (i - cr);
          const int dj = flip ? (cc - j) : (j - cc);
          const int rr = ((r - di) % h + h) % h;
          const int ccx = ((c - dj) % w + w) % w;
          s += k.at(i, j) * x.at(rr, ccx);
        }
      }
      out.at(r, c) = s;
    }
  }
}

}  // namespace

double crr_potential(const Image& x, const CrrModel& m) {
  m.validate();
  Image resp(x.height, x.width);
  double total = 0.0;
  for (std::size_t i = 0; i < m.filters.size(); ++i) {
    apply_filter(x, m.filters[i], false, resp);
    const auto& act = m.activations[i];
    for (double t : resp.pixels) total += act.value(t);
  }
  return m.lambda * total;
}

Image crr_grad(const Image& x, const CrrModel& m) {
  m.validate();
  Image resp(x.height, x.width);
  Image back(x.height, x.width);
  Image grad(x.height, x.width, 0.0);
  for (std::size_t i = 0; i < m.filters.size(); ++i) {
    apply_filter(x, m.filters[i], false, resp);
    const auto& act = m.activations[i];
    for (double& t : resp.pixels) t = act.deriv(t);
    apply_filter(resp, m.filters[i], true, back);
    axpy(grad, 1.0, back);
  }
  for (double& v : grad.pixels) v *= m.lambda;
  return grad;
}

double crr_grad_lipschitz(const CrrModel& m, int height, int width) {
  m.validate();
  double total = 0.0;
  for (std::size_t i = 0; i < m.filters.size(); ++i) {
    // Exact operator norm of the circulant W_i: max transfer magnitude.
    Image pad(height, width, 0.0);
    const auto& f = m.filters[i];
    const int cr = f.height / 2, cc = f.width / 2;
    for (int r = 0; r < f.height; ++r)
      for (int c = 0; c < f.width; ++c) {
        const int rr = ((r - cr) % height + height) % height;
        const int ccx = ((c - cc) % width + width) % width;
        pad.at(rr, ccx) += f.at(r, c);
      }
    double maxmag = 0.0;
    for (const auto& v : fft2(pad)) maxmag = std::max(maxmag, std::abs(v));
    total += m.activations[i].deriv_lipschitz() * maxmag * maxmag;
  }
  return m.lambda * total;
}

CrrModel CrrModel::builtin(double lambda, double huber_delta) {
  CrrModel m;
  m.lambda = lambda;
  const double d = huber_delta;
  const int offsets[8][2] = {{0, 1}, {0, -1}, {1, 0},  {-1, 0},
                             {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (const auto& off : offsets) {
    Image f(3, 3, 0.0);
    f.at(1, 1) = -1.0;
    f.at(1 + off[0], 1 + off[1]) = 1.0;
    m.filters.push_back(std::move(f));
    // Huber-like: slope 1 inside [-d, d], flat derivative beyond 2d, so the
    // linear extrapolation outside the knots stays constant.
    m.activations.emplace_back(-2.0 * d, d, std::vector<double>{-d, -d, 0.0, d, d});
  }
  return m;
}

namespace {

template <typename T>
void write_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const char* what) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in.good()) throw IoError(std::string("crr file: truncated reading ") + what);
  return v;
}

}  // namespace

void save_crr(const std::filesystem::path& path, const CrrModel& m) {
  m.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write("CRR1", 4);
  const auto L = static_cast<std::uint32_t>(m.filters.size());
  const auto fh = static_cast<std::uint32_t>(m.filters.front().height);
  const auto fw = static_cast<std::uint32_t>(m.filters.front().width);
  const auto K = static_cast<std::uint32_t>(m.activations.front().derivs().size());
  write_raw(out, L);
  write_raw(out, fh);
  write_raw(out, fw);
  write_raw(out, K);
  write_raw(out, m.activations.front().spacing());
  write_raw(out, m.activations.front().knot_origin());
  write_raw(out, m.lambda);
  for (const auto& f : m.filters)
    for (double t : f.pixels) write_raw(out, t);
  for (const auto& a : m.activations)
    for (double dval : a.derivs()) write_raw(out, dval);
  if (!out.good()) throw IoError("write failure: " + path.string());
}

CrrModel load_crr(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in.good() || std::memcmp(magic, "CRR1", 4) != 0)
    throw InvalidModel("crr file: bad magic");
  const auto L = read_raw<std::uint32_t>(in, "L");
  const auto fh = read_raw<std::uint32_t>(in, "filter height");
  const auto fw = read_raw<std::uint32_t>(in, "filter width");
  const auto K = read_raw<std::uint32_t>(in, "knot count");
  const auto spacing = read_raw<double>(in, "spacing");
  const auto origin = read_raw<double>(in, "origin");
  const auto lambda = read_raw<double>(in, "lambda");
  if (L == 0 || L > 65536) throw InvalidModel("crr file: bad filter count");
  if (fh == 0 || fw == 0 || fh % 2 == 0 || fw % 2 == 0 || fh > 255 || fw > 255)
    throw InvalidModel("crr file: filter sides must be odd and small");
  if (K == 0 || K > 1u << 20) throw InvalidModel("crr file: bad knot count");

  CrrModel m;
  m.lambda = lambda;
  for (std::uint32_t i = 0; i < L; ++i) {
    Image f(static_cast<int>(fh), static_cast<int>(fw));
    for (double& t : f.pixels) t = read_raw<double>(in, "filter taps");
    m.filters.push_back(std::move(f));
  }
  for (std::uint32_t i = 0; i < L; ++i) {
    std::vector<double> derivs(K);
    for (double& dval : derivs) dval = read_raw<double>(in, "derivative knots");
    if (!PwQuadActivation::monotone(derivs))
      throw InvalidModel("crr file: derivative row " + std::to_string(i) +
                         " is not non-decreasing");
    m.activations.emplace_back(origin, spacing, std::move(derivs));
  }
  m.validate();
  return m;
}

}  // namespace uqx
