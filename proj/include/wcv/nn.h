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

#ifndef WCV_NN_H_
#define WCV_NN_H_

#include <vector>

#include "wcv/tensor.h"

namespace wcv {

inline constexpr float kDefaultLeakySlope = 0.01f;
inline constexpr float kGdnBetaMin = 1e-6f;

// Kernel layout is out_ch x in_ch x k x k for both plain and transposed
// convolutions. Plain convolutions replicate-pad by k/2; a stride-2
// transposed convolution produces exactly 2H x 2W.
struct ConvParams {
  int out_channels = 0;
  int in_channels = 0;
  int kernel_size = 1;
  int stride = 1;
  bool transposed = false;
  std::vector<float> kernel;
  std::vector<float> bias;

  float& weight(int o, int i, int ky, int kx) {
    return kernel[((size_t(o) * in_channels + i) * kernel_size + ky) *
                      kernel_size + kx];
  }
  float weight(int o, int i, int ky, int kx) const {
    return kernel[((size_t(o) * in_channels + i) * kernel_size + ky) *
                      kernel_size + kx];
  }

  // Zero-initialised parameters; validates the geometry.
  static ConvParams Zeros(int out_channels, int in_channels, int kernel_size,
                          int stride, bool transposed = false);
  // 1x1 stride-1 identity mapping.
  static ConvParams Identity(int channels);
  void Validate() const;
};

struct GdnParams {
  std::vector<float> beta;   // C
  std::vector<float> gamma;  // C x C, row i holds the weights for output i
  bool inverse = false;

  int channels() const { return int(beta.size()); }
  // beta = 1, gamma = 0.
  static GdnParams Identity(int channels, bool inverse = false);
};

Tensor Conv2d(const Tensor& x, const ConvParams& p);

Tensor LeakyRelu(const Tensor& x, float slope = kDefaultLeakySlope);
void LeakyReluInPlace(Tensor& x, float slope = kDefaultLeakySlope);

// y_i = x_i / sqrt(beta_i + sum_j gamma_ij x_j^2), or the product form when
// p.inverse is set.
Tensor Gdn(const Tensor& x, const GdnParams& p);

// Recovers x from Gdn(x, p) for forward parameters p by solving for the
// normalisers exactly.
Tensor GdnExactInverse(const Tensor& y, const GdnParams& p);

// log(1 + e^x); maps every real to a positive value.
float Softplus(float x);

struct ResidualBlockParams {
  ConvParams conv0;
  ConvParams conv1;
  float slope = kDefaultLeakySlope;
};

// x + conv1(leaky(conv0(x))).
Tensor ResidualBlock(const Tensor& x, const ResidualBlockParams& p);

}  // namespace wcv

#endif  // WCV_NN_H_
