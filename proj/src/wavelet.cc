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

#include "wcv/wavelet.h"

#include <algorithm>
#include <cmath>

#include "wcv/error.h"
#include "wcv/threading.h"

namespace wcv {
namespace {

// CDF 9/7 lifting constants, JPEG 2000 irreversible convention.
constexpr float kAlpha = -1.586134342f;
constexpr float kBeta = -0.052980118f;
constexpr float kGamma = 0.882911076f;
constexpr float kDelta = 0.443506852f;
constexpr float kK = 1.230174104914f;
constexpr float kInvK = float(1.0 / 1.230174104914);

constexpr float kSqrt2 = 1.41421356237309504880f;
constexpr float kInvSqrt2 = 0.70710678118654752440f;

// Whole-sample reflection for a single step past either end (n >= 2).
inline int Reflect(int i, int n) {
  if (i < 0) return -i;
  if (i >= n) return 2 * (n - 1) - i;
  return i;
}

// x[i] += c * (x[i-1] + x[i+1]) for every i of the given parity.
void LiftStep(float* x, int n, int parity, float c) {
  for (int i = parity; i < n; i += 2) {
    x[i] += c * (x[Reflect(i - 1, n)] + x[Reflect(i + 1, n)]);
  }
}

void Scale(float* x, int n, int parity, float c) {
  for (int i = parity; i < n; i += 2) x[i] *= c;
}

// Operates on the interleaved line: even slots end up low-pass, odd slots
// high-pass.
void ForwardLift(float* x, int n, WaveletKind kind) {
  switch (kind) {
    case WaveletKind::kHaar:
      // The unpaired tail of an odd-length line passes through unchanged so
      // the transform stays orthonormal at every length.
      for (int i = 1; i < n; i += 2) {
        const float d = x[i] - x[i - 1];
        const float s = x[i - 1] + 0.5f * d;
        x[i - 1] = s * kSqrt2;
        x[i] = -d * kInvSqrt2;
      }
      break;
    case WaveletKind::kCdf53:
      LiftStep(x, n, 1, -0.5f);
      LiftStep(x, n, 0, 0.25f);
      break;
    case WaveletKind::kCdf97:
      LiftStep(x, n, 1, kAlpha);
      LiftStep(x, n, 0, kBeta);
      LiftStep(x, n, 1, kGamma);
      LiftStep(x, n, 0, kDelta);
      Scale(x, n, 0, kInvK);
      Scale(x, n, 1, kK);
      break;
  }
}

void InverseLift(float* x, int n, WaveletKind kind) {
  switch (kind) {
    case WaveletKind::kHaar:
      for (int i = 1; i < n; i += 2) {
        const float s = x[i - 1] * kInvSqrt2;
        const float d = -x[i] * kSqrt2;
        const float even = s - 0.5f * d;
        x[i - 1] = even;
        x[i] = d + even;
      }
      break;
    case WaveletKind::kCdf53:
      LiftStep(x, n, 0, -0.25f);
      LiftStep(x, n, 1, 0.5f);
      break;
    case WaveletKind::kCdf97:
      Scale(x, n, 0, kK);
      Scale(x, n, 1, kInvK);
      LiftStep(x, n, 0, -kDelta);
      LiftStep(x, n, 1, -kGamma);
      LiftStep(x, n, 0, -kBeta);
      LiftStep(x, n, 1, -kAlpha);
      break;
  }
}

void CheckBandShapes(const SubbandSet& s) {
  if (s.src_height < 2 || s.src_width < 2) {
    Fail(ErrorKind::kShapeMismatch, "subband source dims below 2x2");
  }
  const Shape want{s.ll.channels(), (s.src_height + 1) / 2,
                   (s.src_width + 1) / 2};
  for (const Tensor* t : {&s.ll, &s.hl, &s.lh, &s.hh}) {
    if (t->shape() != want) {
      Fail(ErrorKind::kShapeMismatch, "subband " + ToString(t->shape()) +
                                          ", expected " + ToString(want));
    }
  }
}

}  // namespace

std::string_view WaveletName(WaveletKind kind) {
  switch (kind) {
    case WaveletKind::kHaar: return "haar";
    case WaveletKind::kCdf53: return "53";
    case WaveletKind::kCdf97: return "97";
  }
  return "?";
}

std::optional<WaveletKind> ParseWavelet(std::string_view name) {
  if (name == "haar") return WaveletKind::kHaar;
  if (name == "53" || name == "cdf53" || name == "5/3") return WaveletKind::kCdf53;
  if (name == "97" || name == "cdf97" || name == "9/7") return WaveletKind::kCdf97;
  return std::nullopt;
}

WaveletKind WaveletFromCode(uint8_t code) {
  if (code > 2) {
    Fail(ErrorKind::kDecodingError, "unknown wavelet code " + std::to_string(code));
  }
  return static_cast<WaveletKind>(code);
}

ExtensionMode ExtensionFor(WaveletKind kind) {
  return kind == WaveletKind::kHaar ? ExtensionMode::kHalfSampleSymmetric
                                    : ExtensionMode::kWholeSampleSymmetric;
}

std::vector<float> SymmetricExtend(std::span<const float> signal, int left,
                                   int right, ExtensionMode mode) {
  const int n = int(signal.size());
  if (n < 2) Fail(ErrorKind::kDegenerateInput, "extension needs >= 2 samples");
  if (left < 0 || right < 0) {
    Fail(ErrorKind::kDegenerateInput, "negative extension");
  }
  const int limit = mode == ExtensionMode::kWholeSampleSymmetric ? n - 1 : n;
  if (left > limit || right > limit) {
    Fail(ErrorKind::kDegenerateInput,
         "extension exceeds one mirror period of a length-" + std::to_string(n) +
             " signal");
  }
  const bool whole = mode == ExtensionMode::kWholeSampleSymmetric;
  std::vector<float> out;
  out.reserve(size_t(n + left + right));
  for (int i = -left; i < n + right; ++i) {
    int j = i;
    if (j < 0) j = whole ? -j : -j - 1;
    if (j >= n) j = whole ? 2 * (n - 1) - j : 2 * n - 1 - j;
    out.push_back(signal[size_t(j)]);
  }
  return out;
}

Bands1d Dwt1d(std::span<const float> signal, WaveletKind kind) {
  const int n = int(signal.size());
  if (n < 2) Fail(ErrorKind::kDegenerateInput, "dwt1d needs >= 2 samples");
  std::vector<float> line(signal.begin(), signal.end());
  ForwardLift(line.data(), n, kind);
  Bands1d out;
  out.low.reserve(size_t((n + 1) / 2));
  out.high.reserve(size_t(n / 2));
  for (int i = 0; i < n; ++i) {
    (i % 2 == 0 ? out.low : out.high).push_back(line[size_t(i)]);
  }
  return out;
}

std::vector<float> Idwt1d(std::span<const float> low,
                          std::span<const float> high, WaveletKind kind) {
  const ptrdiff_t excess = ptrdiff_t(low.size()) - ptrdiff_t(high.size());
  if (excess != 0 && excess != 1) {
    Fail(ErrorKind::kShapeMismatch, "idwt1d band lengths " +
                                        std::to_string(low.size()) + "/" +
                                        std::to_string(high.size()));
  }
  const int n = int(low.size() + high.size());
  if (n < 2) Fail(ErrorKind::kDegenerateInput, "idwt1d needs >= 2 samples");
  std::vector<float> line(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    line[size_t(i)] = i % 2 == 0 ? low[size_t(i / 2)] : high[size_t(i / 2)];
  }
  InverseLift(line.data(), n, kind);
  return line;
}

SubbandSet Dwt2d(const Tensor& x, WaveletKind kind) {
  const int h = x.height();
  const int w = x.width();
  if (h < 2 || w < 2) {
    Fail(ErrorKind::kDegenerateInput, "dwt2d on " + ToString(x.shape()));
  }
  const int bh = (h + 1) / 2;
  const int bw = (w + 1) / 2;
  SubbandSet out;
  out.wavelet = kind;
  out.src_height = h;
  out.src_width = w;
  out.ll = Tensor(x.channels(), bh, bw);
  out.hl = Tensor(x.channels(), bh, bw);
  out.lh = Tensor(x.channels(), bh, bw);
  out.hh = Tensor(x.channels(), bh, bw);

  ParallelFor(0, x.channels(), [&](int c) {
    // Row pass into horizontal low/high planes (h x bw each).
    std::vector<float> row_low(size_t(h) * bw, 0.0f);
    std::vector<float> row_high(size_t(h) * bw, 0.0f);
    std::vector<float> line(size_t(std::max(h, w)));
    for (int y = 0; y < h; ++y) {
      for (int i = 0; i < w; ++i) line[size_t(i)] = x.at(c, y, i);
      ForwardLift(line.data(), w, kind);
      for (int i = 0; i < w; ++i) {
        (i % 2 == 0 ? row_low : row_high)[size_t(y) * bw + i / 2] = line[size_t(i)];
      }
    }
    // Column pass.
    auto columns = [&](const std::vector<float>& src, int cols, Tensor& lo,
                       Tensor& hi) {
      for (int i = 0; i < cols; ++i) {
        for (int y = 0; y < h; ++y) line[size_t(y)] = src[size_t(y) * bw + i];
        ForwardLift(line.data(), h, kind);
        for (int y = 0; y < h; ++y) {
          (y % 2 == 0 ? lo : hi).at(c, y / 2, i) = line[size_t(y)];
        }
      }
    };
    columns(row_low, bw, out.ll, out.lh);
    columns(row_high, w / 2, out.hl, out.hh);
  });
  return out;
}

Tensor Idwt2d(const SubbandSet& s) {
  CheckBandShapes(s);
  const int h = s.src_height;
  const int w = s.src_width;
  const int bw = (w + 1) / 2;
  const WaveletKind kind = s.wavelet;
  Tensor out(s.ll.channels(), h, w);

  ParallelFor(0, s.ll.channels(), [&](int c) {
    std::vector<float> row_low(size_t(h) * bw, 0.0f);
    std::vector<float> row_high(size_t(h) * bw, 0.0f);
    std::vector<float> line(size_t(std::max(h, w)));
    auto columns = [&](const Tensor& lo, const Tensor& hi, int cols,
                       std::vector<float>& dst) {
      for (int i = 0; i < cols; ++i) {
        for (int y = 0; y < h; ++y) {
          line[size_t(y)] = (y % 2 == 0 ? lo : hi).at(c, y / 2, i);
        }
        InverseLift(line.data(), h, kind);
        for (int y = 0; y < h; ++y) dst[size_t(y) * bw + i] = line[size_t(y)];
      }
    };
    columns(s.ll, s.lh, bw, row_low);
    columns(s.hl, s.hh, w / 2, row_high);
    for (int y = 0; y < h; ++y) {
      for (int i = 0; i < w; ++i) {
        line[size_t(i)] =
            (i % 2 == 0 ? row_low : row_high)[size_t(y) * bw + i / 2];
      }
      InverseLift(line.data(), w, kind);
      for (int i = 0; i < w; ++i) out.at(c, y, i) = line[size_t(i)];
    }
  });
  return out;
}

}  // namespace wcv
