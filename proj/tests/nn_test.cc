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

#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "test_util.h"
#include "wcv/error.h"
#include "wcv/nn.h"
#include "wcv/threading.h"

namespace wcv {
namespace {

ConvParams RandomConv(test::SplitMix64& rng, int out, int in, int k, int stride,
                      bool transposed) {
  ConvParams p = ConvParams::Zeros(out, in, k, stride, transposed);
  for (float& w : p.kernel) w = float(rng.Uniform(-1, 1));
  for (float& b : p.bias) b = float(rng.Uniform(-1, 1));
  return p;
}

// Direct summation with explicit replicate padding.
Tensor NaiveConv(const Tensor& x, const ConvParams& p) {
  const int pad = p.kernel_size / 2;
  const int oh = (x.height() + p.stride - 1) / p.stride;
  const int ow = (x.width() + p.stride - 1) / p.stride;
  Tensor out(p.out_channels, oh, ow);
  for (int o = 0; o < p.out_channels; ++o) {
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        double s = p.bias[size_t(o)];
        for (int i = 0; i < p.in_channels; ++i) {
          for (int ky = 0; ky < p.kernel_size; ++ky) {
            for (int kx = 0; kx < p.kernel_size; ++kx) {
              const int y = std::clamp(oy * p.stride + ky - pad, 0, x.height() - 1);
              const int xx = std::clamp(ox * p.stride + kx - pad, 0, x.width() - 1);
              s += double(p.weight(o, i, ky, kx)) * x.at(i, y, xx);
            }
          }
        }
        out.at(o, oy, ox) = float(s);
      }
    }
  }
  return out;
}

// Scatter definition: input (iy, ix) lands on (iy*s + ky - k/2, ix*s + kx - k/2).
Tensor NaiveTransposed(const Tensor& x, const ConvParams& p) {
  const int pad = p.kernel_size / 2;
  const int oh = x.height() * p.stride;
  const int ow = x.width() * p.stride;
  std::vector<double> acc(size_t(p.out_channels) * oh * ow);
  for (int o = 0; o < p.out_channels; ++o) {
    for (size_t j = 0; j < size_t(oh) * ow; ++j) acc[size_t(o) * oh * ow + j] = p.bias[size_t(o)];
    for (int i = 0; i < p.in_channels; ++i) {
      for (int iy = 0; iy < x.height(); ++iy) {
        for (int ix = 0; ix < x.width(); ++ix) {
          for (int ky = 0; ky < p.kernel_size; ++ky) {
            for (int kx = 0; kx < p.kernel_size; ++kx) {
              const int y = iy * p.stride + ky - pad;
              const int xx = ix * p.stride + kx - pad;
              if (y < 0 || y >= oh || xx < 0 || xx >= ow) continue;
              acc[(size_t(o) * oh + y) * ow + xx] +=
                  double(p.weight(o, i, ky, kx)) * x.at(i, iy, ix);
            }
          }
        }
      }
    }
  }
  Tensor out(p.out_channels, oh, ow);
  for (size_t j = 0; j < acc.size(); ++j) out.values()[j] = float(acc[j]);
  return out;
}

TEST_CASE("identity and constant convolutions") {
  test::SplitMix64 rng(1);
  const Tensor x = test::RandomTensor(rng, 3, 6, 5);
  CHECK(Conv2d(x, ConvParams::Identity(3)) == x);

  ConvParams ones = ConvParams::Zeros(1, 1, 3, 1);
  std::fill(ones.kernel.begin(), ones.kernel.end(), 1.0f);
  const Tensor c(1, 7, 4, 2.5f);
  const Tensor summed = Conv2d(c, ones);
  for (float v : summed.values()) CHECK(v == doctest::Approx(22.5));
}

TEST_CASE("convolution matches direct summation") {
  test::SplitMix64 rng(2);
  const Tensor x = test::RandomTensor(rng, 4, 9, 9);
  const ConvParams p = RandomConv(rng, 8, 4, 3, 1, false);
  CHECK(MaxAbsDiff(Conv2d(x, p), NaiveConv(x, p)) <= 1e-5f);

  for (int trial = 0; trial < 40; ++trial) {
    const int cin = rng.Int(1, 8);
    const int cout = rng.Int(1, 8);
    const int h = rng.Int(1, 16);
    const int w = rng.Int(1, 16);
    const int k = rng.Int(0, 1) ? 3 : 1;
    const int s = rng.Int(1, 2);
    const Tensor in = test::RandomTensor(rng, cin, h, w);
    const ConvParams conv = RandomConv(rng, cout, cin, k, s, false);
    const Tensor got = Conv2d(in, conv);
    CHECK(got.shape() == Shape{cout, (h + s - 1) / s, (w + s - 1) / s});
    CHECK(MaxAbsDiff(got, NaiveConv(in, conv)) <= 1e-5f);
    const ConvParams tconv = RandomConv(rng, cout, cin, k, s, true);
    const Tensor up = Conv2d(in, tconv);
    CHECK(up.shape() == Shape{cout, h * s, w * s});
    CHECK(MaxAbsDiff(up, NaiveTransposed(in, tconv)) <= 1e-5f);
  }
}

TEST_CASE("convolution is independent of the thread count") {
  test::SplitMix64 rng(3);
  const Tensor x = test::RandomTensor(rng, 6, 13, 11);
  const ConvParams p = RandomConv(rng, 7, 6, 3, 2, false);
  SetThreadCount(1);
  const Tensor a = Conv2d(x, p);
  SetThreadCount(4);
  const Tensor b = Conv2d(x, p);
  SetThreadCount(1);
  CHECK(a == b);
}

TEST_CASE("convolution errors") {
  const Tensor x(2, 4, 4);
  try {
    Conv2d(x, ConvParams::Zeros(1, 3, 3, 1));
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kShapeMismatch);
  }
  CHECK_THROWS_AS(ConvParams::Zeros(1, 1, 2, 1), Error);
  CHECK_THROWS_AS(ConvParams::Zeros(1, 1, 3, 3), Error);
}

TEST_CASE("leaky relu") {
  Tensor x(1, 1, 2);
  x.values()[0] = 2.0f;
  x.values()[1] = -1.0f;
  const Tensor y = LeakyRelu(x, 0.01f);
  CHECK(y.values()[0] == 2.0f);
  CHECK(y.values()[1] == doctest::Approx(-0.01));
  test::SplitMix64 rng(4);
  const Tensor pos = test::RandomTensor(rng, 2, 3, 3, 0.0, 5.0);
  CHECK(LeakyRelu(LeakyRelu(pos)) == LeakyRelu(pos));
}

TEST_CASE("gdn") {
  test::SplitMix64 rng(5);
  const Tensor x = test::RandomTensor(rng, 3, 4, 4, -3, 3);
  CHECK(MaxAbsDiff(Gdn(x, GdnParams::Identity(3)), x) == 0.0f);

  GdnParams one{{1.0f}, {1.0f}, false};
  const Tensor three(1, 1, 1, 3.0f);
  CHECK(Gdn(three, one).values()[0] == doctest::Approx(0.94868330));
  one.inverse = true;
  CHECK(Gdn(three, one).values()[0] == doctest::Approx(3.0 * std::sqrt(10.0)));

  GdnParams p = GdnParams::Identity(3);
  for (float& b : p.beta) b = float(rng.Uniform(0.5, 1.5));
  for (float& g : p.gamma) g = float(rng.Uniform(0.0, 0.2));
  const Tensor y = Gdn(x, p);
  CHECK(AllFinite(y));
  CHECK(MaxAbsDiff(GdnExactInverse(y, p), x) <= 1e-4f);

  Tensor bad = x;
  bad.values()[0] = std::numeric_limits<float>::infinity();
  try {
    Gdn(bad, p);
    FAIL("expected NumericalError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNumericalError);
  }
}

TEST_CASE("residual block") {
  test::SplitMix64 rng(6);
  const Tensor x = test::RandomTensor(rng, 4, 7, 6);
  ResidualBlockParams zero{ConvParams::Zeros(4, 4, 3, 1), ConvParams::Zeros(4, 4, 3, 1)};
  CHECK(ResidualBlock(x, zero) == x);

  ResidualBlockParams r{RandomConv(rng, 5, 4, 3, 1, false),
                        RandomConv(rng, 4, 5, 3, 1, false), 0.2f};
  Tensor branch = Conv2d(LeakyRelu(Conv2d(x, r.conv0), 0.2f), r.conv1);
  for (size_t i = 0; i < branch.size(); ++i) branch.values()[i] += x.values()[i];
  CHECK(ResidualBlock(x, r) == branch);

  std::fill(r.conv0.bias.begin(), r.conv0.bias.end(), 0.0f);
  std::fill(r.conv1.bias.begin(), r.conv1.bias.end(), 0.0f);
  const Tensor zero_out = ResidualBlock(Tensor(4, 3, 3), r);
  for (float v : zero_out.values()) CHECK(v == 0.0f);

  CHECK_THROWS_AS(ResidualBlock(Tensor(3, 3, 3), r), Error);
}

TEST_CASE("softplus is positive") {
  CHECK(Softplus(0.0f) == doctest::Approx(std::log(2.0)));
  CHECK(Softplus(-40.0f) > 0.0f);
  CHECK(Softplus(50.0f) == 50.0f);
}

}  // namespace
}  // namespace wcv
