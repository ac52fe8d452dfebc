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

#ifndef WCV_WAVELET_H_
#define WCV_WAVELET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wcv/tensor.h"

namespace wcv {

// Wire codes are fixed: they appear in bitstream headers and manifests.
enum class WaveletKind : uint8_t {
  kHaar = 0,
  kCdf53 = 1,
  kCdf97 = 2,
};

std::string_view WaveletName(WaveletKind kind);
// Accepts "haar", "53", "97" (and the "cdf" prefixed spellings).
std::optional<WaveletKind> ParseWavelet(std::string_view name);
// Validates a wire code; DecodingError for anything other than 0..2.
WaveletKind WaveletFromCode(uint8_t code);

enum class ExtensionMode {
  kWholeSampleSymmetric,  // ... x2 x1 | x0 x1 x2 ...
  kHalfSampleSymmetric,   // ... x1 x0 | x0 x1 x2 ...
};

ExtensionMode ExtensionFor(WaveletKind kind);

// Mirrors `signal` by `left` and `right` samples. A single reflection is
// admissible: whole-sample needs left, right <= n - 1, half-sample <= n.
std::vector<float> SymmetricExtend(std::span<const float> signal, int left,
                                   int right, ExtensionMode mode);

struct Bands1d {
  std::vector<float> low;   // ceil(n / 2): even-indexed phase
  std::vector<float> high;  // floor(n / 2): odd-indexed phase
};

Bands1d Dwt1d(std::span<const float> signal, WaveletKind kind);
std::vector<float> Idwt1d(std::span<const float> low,
                          std::span<const float> high, WaveletKind kind);

// One level of the separable 2-D transform (rows first, then columns).
//   hl: horizontal high-pass, vertical low-pass
//   lh: horizontal low-pass, vertical high-pass
// Every band is C x ceil(H/2) x ceil(W/2); positions that have no coefficient
// for odd sizes are held at zero and ignored by the inverse.
struct SubbandSet {
  Tensor ll;
  Tensor hl;
  Tensor lh;
  Tensor hh;
  WaveletKind wavelet = WaveletKind::kHaar;
  int src_height = 0;
  int src_width = 0;
};

SubbandSet Dwt2d(const Tensor& x, WaveletKind kind);
Tensor Idwt2d(const SubbandSet& bands);

}  // namespace wcv

#endif  // WCV_WAVELET_H_
