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

#include "wcv/nn.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "wcv/error.h"
#include "wcv/threading.h"

namespace wcv {

ConvParams ConvParams::Zeros(int out_channels, int in_channels, int kernel_size,
                             int stride, bool transposed) {
  ConvParams p;
  p.out_channels = out_channels;
  p.in_channels = in_channels;
  p.kernel_size = kernel_size;
  p.stride = stride;
  p.transposed = transposed;
  p.kernel.assign(size_t(out_channels) * in_channels * kernel_size * kernel_size,
                  0.0f);
  p.bias.assign(size_t(out_channels), 0.0f);
  p.Validate();
  return p;
}

ConvParams ConvParams::Identity(int channels) {
  ConvParams p = Zeros(channels, channels, 1, 1);
  for (int c = 0; c < channels; ++c) p.weight(c, c, 0, 0) = 1.0f;
  return p;
}

void ConvParams::Validate() const {
  if (out_channels <= 0 || in_channels <= 0) {
    Fail(ErrorKind::kBadShape, "convolution needs positive channel counts");
  }
  if (kernel_size <= 0 || kernel_size % 2 == 0) {
    Fail(ErrorKind::kBadShape,
         "kernel size must be odd, got " + std::to_string(kernel_size));
  }
  if (stride != 1 && stride != 2) {
    Fail(ErrorKind::kBadShape, "stride must be 1 or 2");
  }
  if (kernel.size() !=
      size_t(out_channels) * in_channels * kernel_size * kernel_size) {
    Fail(ErrorKind::kBadShape, "kernel size does not match geometry");
  }
  if (bias.size() != size_t(out_channels)) {
    Fail(ErrorKind::kBadShape, "bias length does not match out channels");
  }
}

GdnParams GdnParams::Identity(int channels, bool inverse) {
  GdnParams p;
  p.beta.assign(size_t(channels), 1.0f);
  p.gamma.assign(size_t(channels) * channels, 0.0f);
  p.inverse = inverse;
  return p;
}

namespace {

Tensor ConvForward(const Tensor& x, const ConvParams& p) {
  const int k = p.kernel_size;
  const int pad = k / 2;
  const int s = p.stride;
  const int h = x.height();
  const int w = x.width();
  const int oh = (h + s - 1) / s;
  const int ow = (w + s - 1) / s;
  const int ph = h + 2 * pad;
  const int pw = w + 2 * pad;

  // Replicate-padded copy of the input.
  std::vector<float> padded(size_t(x.channels()) * ph * pw);
  for (int c = 0; c < x.channels(); ++c) {
    for (int y = 0; y < ph; ++y) {
      const int sy = std::clamp(y - pad, 0, h - 1);
      float* dst = padded.data() + (size_t(c) * ph + y) * pw;
      for (int i = 0; i < pw; ++i) dst[i] = x.at(c, sy, std::clamp(i - pad, 0, w - 1));
    }
  }

  Tensor out(p.out_channels, oh, ow);
  ParallelFor(0, p.out_channels, [&](int o) {
    float* dst = out.plane(o).data();
    std::fill(dst, dst + size_t(oh) * ow, p.bias[size_t(o)]);
    for (int i = 0; i < p.in_channels; ++i) {
      const float* src = padded.data() + size_t(i) * ph * pw;
      for (int ky = 0; ky < k; ++ky) {
        for (int kx = 0; kx < k; ++kx) {
          const float wt = p.weight(o, i, ky, kx);
          if (wt == 0.0f) continue;
          for (int oy = 0; oy < oh; ++oy) {
            const float* row = src + size_t(oy * s + ky) * pw + kx;
            float* orow = dst + size_t(oy) * ow;
            if (s == 1) {
              for (int ox = 0; ox < ow; ++ox) orow[ox] += wt * row[ox];
            } else {
              for (int ox = 0; ox < ow; ++ox) orow[ox] += wt * row[ox * s];
            }
          }
        }
      }
    }
  });
  return out;
}

// out[oy, ox] += in[iy, ix] * w[ky, kx] where oy = iy * s + ky - k/2.
Tensor ConvTransposed(const Tensor& x, const ConvParams& p) {
  const int k = p.kernel_size;
  const int pad = k / 2;
  const int s = p.stride;
  const int h = x.height();
  const int w = x.width();
  const int oh = h * s;
  const int ow = w * s;
  Tensor out(p.out_channels, oh, ow);
  ParallelFor(0, p.out_channels, [&](int o) {
    float* dst = out.plane(o).data();
    std::fill(dst, dst + size_t(oh) * ow, p.bias[size_t(o)]);
    for (int i = 0; i < p.in_channels; ++i) {
      const float* src = x.plane(i).data();
      for (int ky = 0; ky < k; ++ky) {
        for (int kx = 0; kx < k; ++kx) {
          const float wt = p.weight(o, i, ky, kx);
          if (wt == 0.0f) continue;
          // Valid ix satisfy 0 <= ix * s + kx - pad < ow.
          const int ix0 = std::max(0, (pad - kx + s - 1) / s);
          const int ix1 = std::min(w, (ow - 1 + pad - kx) / s + 1);
          for (int iy = 0; iy < h; ++iy) {
            const int oy = iy * s + ky - pad;
            if (oy < 0 || oy >= oh) continue;
            const float* row = src + size_t(iy) * w;
            float* orow = dst + size_t(oy) * ow;
            for (int ix = ix0; ix < ix1; ++ix) {
              orow[ix * s + kx - pad] += wt * row[ix];
            }
          }
        }
      }
    }
  });
  return out;
}

}  // namespace

Tensor Conv2d(const Tensor& x, const ConvParams& p) {
  if (x.channels() != p.in_channels) {
    Fail(ErrorKind::kShapeMismatch,
         "conv expects " + std::to_string(p.in_channels) + " channels, got " +
             ToString(x.shape()));
  }
  if (x.height() < 1 || x.width() < 1) {
    Fail(ErrorKind::kDegenerateInput, "conv on empty tensor");
  }
  return p.transposed ? ConvTransposed(x, p) : ConvForward(x, p);
}

Tensor LeakyRelu(const Tensor& x, float slope) {
  Tensor out = x;
  LeakyReluInPlace(out, slope);
  return out;
}

void LeakyReluInPlace(Tensor& x, float slope) {
  for (float& v : x.values()) v = std::max(v, slope * v);
}

Tensor Gdn(const Tensor& x, const GdnParams& p) {
  const int c = x.channels();
  if (p.channels() != c || p.gamma.size() != size_t(c) * c) {
    Fail(ErrorKind::kShapeMismatch, "GDN parameters for " +
                                        std::to_string(p.channels()) +
                                        " channels applied to " +
                                        ToString(x.shape()));
  }
  const size_t plane = x.shape().plane_size();
  std::vector<float> squares(x.size());
  for (size_t i = 0; i < x.size(); ++i) squares[i] = x.values()[i] * x.values()[i];

  Tensor out(x.shape());
  ParallelFor(0, c, [&](int i) {
    std::vector<float> norm(plane, p.beta[size_t(i)]);
    for (int j = 0; j < c; ++j) {
      const float g = p.gamma[size_t(i) * c + j];
      if (g == 0.0f) continue;
      const float* sq = squares.data() + size_t(j) * plane;
      for (size_t k = 0; k < plane; ++k) norm[k] += g * sq[k];
    }
    const float* src = x.plane(i).data();
    float* dst = out.plane(i).data();
    for (size_t k = 0; k < plane; ++k) {
      const float n = norm[k];
      if (!(n > 0.0f) || !std::isfinite(n)) {
        Fail(ErrorKind::kNumericalError,
             "GDN normaliser " + std::to_string(n) + " in channel " +
                 std::to_string(i));
      }
      const float r = std::sqrt(n);
      const float v = p.inverse ? src[k] * r : src[k] / r;
      if (!std::isfinite(v)) {
        Fail(ErrorKind::kNumericalError, "non-finite GDN output");
      }
      dst[k] = v;
    }
  });
  return out;
}

Tensor GdnExactInverse(const Tensor& y, const GdnParams& p) {
  const int c = y.channels();
  if (p.channels() != c || p.gamma.size() != size_t(c) * c) {
    Fail(ErrorKind::kShapeMismatch, "GDN parameters do not match " +
                                        ToString(y.shape()));
  }
  // With s_i = beta_i + sum_j gamma_ij x_j^2 and x_j = y_j sqrt(s_j), the
  // normalisers satisfy (I - G diag(y^2)) s = beta.
  Eigen::MatrixXd gamma(c, c);
  Eigen::VectorXd beta(c);
  for (int i = 0; i < c; ++i) {
    beta(i) = p.beta[size_t(i)];
    for (int j = 0; j < c; ++j) gamma(i, j) = p.gamma[size_t(i) * c + j];
  }
  Tensor out(y.shape());
  const size_t plane = y.shape().plane_size();
  for (size_t k = 0; k < plane; ++k) {
    Eigen::VectorXd y2(c);
    for (int j = 0; j < c; ++j) {
      const double v = y.plane(j)[k];
      y2(j) = v * v;
    }
    const Eigen::MatrixXd a =
        Eigen::MatrixXd::Identity(c, c) - gamma * y2.asDiagonal();
    const Eigen::VectorXd s = a.partialPivLu().solve(beta);
    for (int i = 0; i < c; ++i) {
      if (!(s(i) > 0.0) || !std::isfinite(s(i))) {
        Fail(ErrorKind::kNumericalError, "GDN output is outside the invertible range");
      }
      out.plane(i)[k] = float(y.plane(i)[k] * std::sqrt(s(i)));
    }
  }
  return out;
}

float Softplus(float x) {
  if (x > 20.0f) return x;
  if (x < -20.0f) return std::exp(x);
  return std::log1p(std::exp(x));
}

Tensor ResidualBlock(const Tensor& x, const ResidualBlockParams& p) {
  if (p.conv0.in_channels != x.channels() ||
      p.conv1.out_channels != x.channels() || p.conv0.stride != 1 ||
      p.conv1.stride != 1) {
    Fail(ErrorKind::kShapeMismatch, "residual block must preserve " +
                                        ToString(x.shape()));
  }
  Tensor branch = Conv2d(x, p.conv0);
  LeakyReluInPlace(branch, p.slope);
  branch = Conv2d(branch, p.conv1);
  for (size_t i = 0; i < branch.size(); ++i) branch.values()[i] += x.values()[i];
  return branch;
}

}  // namespace wcv
