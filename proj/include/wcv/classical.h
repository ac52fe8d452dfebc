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

#ifndef WCV_CLASSICAL_H_
#define WCV_CLASSICAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "wcv/entropy.h"
#include "wcv/tensor.h"
#include "wcv/wavelet.h"

namespace wcv {

inline constexpr int kDefaultLevels = 3;
// Coefficient symbols are far wider than neural latents.
inline constexpr SymbolRange kClassicalRange{-(1 << 24), 1 << 24};

// levels[0] is the finest decomposition; levels.back().ll is the coarsest LF.
struct Pyramid {
  std::vector<SubbandSet> levels;
};

Pyramid Decompose(const Tensor& x, WaveletKind kind, int levels);
Tensor Reconstruct(const Pyramid& pyramid);

struct ClassicalOptions {
  WaveletKind wavelet = WaveletKind::kCdf53;
  int levels = kDefaultLevels;
  float qstep = 1.0f;
};

struct ClassicalStreams {
  std::vector<uint8_t> block;  // qstep, level count and the sigma table
  std::vector<uint8_t> lf;
  std::vector<uint8_t> hf;
  double estimated_bits = 0.0;  // entropy of lf + hf under the coded model
};

// `image` holds 8-bit sample values.
ClassicalStreams ClassicalEncode(const Tensor& image, const ClassicalOptions& options);
Tensor ClassicalDecode(std::span<const uint8_t> block, std::span<const uint8_t> lf,
                       std::span<const uint8_t> hf, WaveletKind wavelet,
                       const Shape& shape);

// Every quantised coefficient that carries information (padding positions of
// odd-sized bands excluded), in coding order.
std::vector<int32_t> QuantizedCoefficients(const Tensor& image,
                                           const ClassicalOptions& options);

double ZeroFraction(std::span<const int32_t> values);

}  // namespace wcv

#endif  // WCV_CLASSICAL_H_
