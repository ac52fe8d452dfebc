// Copyright 2026 The wcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wcv/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wcv/error.h"

namespace wcv {
namespace {

constexpr int kScales = 5;
constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;
constexpr double kMaxValue = 255.0;
constexpr std::array<double, kScales> kScaleWeights = {0.0448, 0.2856, 0.3001,
                                                        0.2363, 0.1333};

struct Plane {
  int height = 0;
  int width = 0;
  std::vector<double> v;
  double at(int y, int x) const { return v[size_t(y) * width + x]; }
};

Plane PlaneOf(const Tensor& t, int c) {
  Plane p{t.height(), t.width(), {}};
  p.v.assign(t.plane(c).begin(), t.plane(c).end());
  return p;
}

std::vector<double> GaussianTaps(int size, double sigma) {
  std::vector<double> taps(static_cast<size_t>(size));
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - (size - 1) / 2.0;
    taps[size_t(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += taps[size_t(i)];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Separable valid-mode filtering.
Plane Filter(const Plane& p, const std::vector<double>& taps) {
  const int k = int(taps.size());
  Plane rows{p.height, p.width - k + 1, {}};
  rows.v.resize(size_t(rows.height) * rows.width);
  for (int y = 0; y < rows.height; ++y) {
    for (int x = 0; x < rows.width; ++x) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += taps[size_t(i)] * p.at(y, x + i);
      rows.v[size_t(y) * rows.width + x] = s;
    }
  }
  Plane out{p.height - k + 1, rows.width, {}};
  out.v.resize(size_t(out.height) * out.width);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += taps[size_t(i)] * rows.at(y + i, x);
      out.v[size_t(y) * out.width + x] = s;
    }
  }
  return out;
}

Plane Product(const Plane& a, const Plane& b) {
  Plane out = a;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.v[i];
  return out;
}

// Mean SSIM and mean contrast-structure term of one scale.
std::pair<double, double> SsimTerms(const Plane& a, const Plane& b) {
  const int size = std::min({kWindow, a.height, a.width});
  const auto taps = GaussianTaps(size, kWindowSigma * size / kWindow);
  const Plane mu_a = Filter(a, taps);
  const Plane mu_b = Filter(b, taps);
  const Plane aa = Filter(Product(a, a), taps);
  const Plane bb = Filter(Product(b, b), taps);
  const Plane ab = Filter(Product(a, b), taps);
  const double c1 = (kK1 * kMaxValue) * (kK1 * kMaxValue);
  const double c2 = (kK2 * kMaxValue) * (kK2 * kMaxValue);
  double ssim = 0.0;
  double cs = 0.0;
  for (size_t i = 0; i < mu_a.v.size(); ++i) {
    const double ma = mu_a.v[i];
    const double mb = mu_b.v[i];
    const double lum = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
    const double var_a = aa.v[i] - ma * ma;
    const double var_b = bb.v[i] - mb * mb;
    const double cov = ab.v[i] - ma * mb;
    const double contrast = (2.0 * cov + c2) / (var_a + var_b + c2);
    ssim += lum * contrast;
    cs += contrast;
  }
  const double n = double(mu_a.v.size());
  return {ssim / n, cs / n};
}

Plane Downsample(const Plane& p) {
  Plane out{(p.height + 1) / 2, (p.width + 1) / 2, {}};
  out.v.resize(size_t(out.height) * out.width);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      double s = 0.0;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          s += p.at(std::min(2 * y + dy, p.height - 1), std::min(2 * x + dx, p.width - 1));
        }
      }
      out.v[size_t(y) * out.width + x] = s / 4.0;
    }
  }
  return out;
}

double ChannelMsSsim(Plane a, Plane b) {
  double score = 1.0;
  for (int s = 0; s < kScales; ++s) {
    const auto [ssim, cs] = SsimTerms(a, b);
    const double term = s + 1 == kScales ? ssim : cs;
    score *= std::pow(std::max(term, 0.0), kScaleWeights[size_t(s)]);
    if (s + 1 < kScales) {
      a = Downsample(a);
      b = Downsample(b);
    }
  }
  return score;
}

// Least-squares cubic in centred PSNR: log10(rate) ~ sum c_i (x - centre)^i.
Eigen::Vector4d FitCubic(std::span<const RdPoint> pts, double centre) {
  Eigen::MatrixXd a(Eigen::Index(pts.size()), 4);
  Eigen::VectorXd y(Eigen::Index(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i].psnr_db - centre;
    for (int p = 0; p < 4; ++p) a(Eigen::Index(i), p) = std::pow(x, p);
    y(Eigen::Index(i)) = std::log10(pts[i].bpp);
  }
  return a.colPivHouseholderQr().solve(y);
}

double IntegrateCubic(const Eigen::Vector4d& c, double lo, double hi) {
  double sum = 0.0;
  for (int p = 0; p < 4; ++p) {
    sum += c(p) * (std::pow(hi, p + 1) - std::pow(lo, p + 1)) / (p + 1);
  }
  return sum;
}

void CheckCurve(std::span<const RdPoint> curve, const char* name) {
  if (curve.size() < 4) {
    Fail(ErrorKind::kDegenerateInput,
         std::string("curve ") + name + " needs at least 4 points");
  }
  for (const RdPoint& p : curve) {
    if (!(p.bpp > 0.0) || !std::isfinite(p.bpp) || !std::isfinite(p.psnr_db)) {
      Fail(ErrorKind::kDegenerateInput,
           std::string("curve ") + name + " has a non-positive or non-finite point");
    }
  }
}

}  // namespace

double Psnr(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    Fail(ErrorKind::kShapeMismatch,
         "PSNR of " + ToString(a.shape()) + " against " + ToString(b.shape()));
  }
  if (a.empty()) Fail(ErrorKind::kDegenerateInput, "PSNR of empty images");
  double sse = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = double(a.values()[i]) - double(b.values()[i]);
    sse += d * d;
  }
  const double mse = sse / double(a.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(kMaxValue * kMaxValue / mse));
}

double MsSsim(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    Fail(ErrorKind::kShapeMismatch,
         "MS-SSIM of " + ToString(a.shape()) + " against " + ToString(b.shape()));
  }
  if (a.height() < kMsSsimMinSize || a.width() < kMsSsimMinSize || a.channels() < 1) {
    Fail(ErrorKind::kDegenerateInput, "MS-SSIM needs at least " +
                                          std::to_string(kMsSsimMinSize) + "x" +
                                          std::to_string(kMsSsimMinSize) + " pixels");
  }
  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) total += ChannelMsSsim(PlaneOf(a, c), PlaneOf(b, c));
  return total / a.channels();
}

double BdRate(std::span<const RdPoint> a, std::span<const RdPoint> b) {
  CheckCurve(a, "a");
  CheckCurve(b, "b");
  auto range = [](std::span<const RdPoint> c) {
    const auto [lo, hi] = std::minmax_element(
        c.begin(), c.end(),
        [](const RdPoint& x, const RdPoint& y) { return x.psnr_db < y.psnr_db; });
    return std::pair(lo->psnr_db, hi->psnr_db);
  };
  const auto [a_lo, a_hi] = range(a);
  const auto [b_lo, b_hi] = range(b);
  const double lo = std::max(a_lo, b_lo);
  const double hi = std::min(a_hi, b_hi);
  if (!(hi > lo)) Fail(ErrorKind::kDegenerateInput, "curves share no PSNR interval");

  const double centre = 0.5 * (lo + hi);
  const Eigen::Vector4d fa = FitCubic(a, centre);
  const Eigen::Vector4d fb = FitCubic(b, centre);
  const double diff = (IntegrateCubic(fb, lo - centre, hi - centre) -
                       IntegrateCubic(fa, lo - centre, hi - centre)) /
                      (hi - lo);
  return (std::pow(10.0, diff) - 1.0) * 100.0;
}

}  // namespace wcv
