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

#ifndef WCV_WECHARM_H_
#define WCV_WECHARM_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wcv/entropy.h"
#include "wcv/graph.h"
#include "wcv/tensor.h"

namespace wcv {

enum class SliceOrigin { kLf, kHf };

struct SliceSet {
  std::vector<Tensor> slices;
  int channels_per_slice = 0;
  SliceOrigin origin = SliceOrigin::kLf;
};

SliceSet SplitSlices(const Tensor& y, int k, SliceOrigin origin);
Tensor MergeSlices(const SliceSet& set);

// Inputs of one slice network. decoded_lf is set only for HF slices.
struct SliceContext {
  const Tensor* side_mean = nullptr;
  const Tensor* side_scale = nullptr;
  const Tensor* decoded_lf = nullptr;
  std::vector<const Tensor*> previous;
};

struct GaussianParams {
  Tensor mu;
  Tensor sigma;  // already clamped to kSigmaMin
};

GaussianParams PredictSliceParams(const SliceContext& ctx, const SliceNetParams& net,
                                  float slope = kDefaultLeakySlope);

struct BandEncoding {
  std::vector<uint8_t> bytes;  // k length-prefixed slice streams
  Tensor decoded;              // what the decoder will reconstruct
  double estimated_bits = 0.0;
};

// Called after each slice is reconstructed, in coding order.
using SliceCallback = std::function<void(int index, const Tensor& slice)>;

BandEncoding EncodeLf(const Tensor& y_l, const SideInfo& side, const Model& model);
Tensor DecodeLf(std::span<const uint8_t> bytes, const SideInfo& side,
                const Model& model, const SliceCallback& on_slice = {});

// decoded_lf must be the LF reconstruction; null or empty -> PreconditionViolation.
BandEncoding EncodeHf(const Tensor& y_h, const Tensor* decoded_lf,
                      const SideInfo& side, const Model& model);
Tensor DecodeHf(std::span<const uint8_t> bytes, const Tensor* decoded_lf,
                const SideInfo& side, const Model& model,
                const SliceCallback& on_slice = {});

struct RateReport {
  double bits_z = 0.0;
  double bits_yl = 0.0;
  double bits_yh = 0.0;
  size_t bytes_z = 0;
  size_t bytes_yl = 0;
  size_t bytes_yh = 0;

  double estimated_bits() const { return bits_z + bits_yl + bits_yh; }
  size_t payload_bytes() const { return bytes_z + bytes_yl + bytes_yh; }
};

struct NeuralStreams {
  std::vector<uint8_t> z;
  std::vector<uint8_t> lf;
  std::vector<uint8_t> hf;
  RateReport report;
};

// `image` is normalised to [-1, 1] and already padded to the tile size.
NeuralStreams NeuralEncode(const Tensor& image, const Model& model);
// Returns the normalised reconstruction at padded size.
Tensor NeuralDecode(const NeuralStreams& streams, int padded_height,
                    int padded_width, const Model& model);

}  // namespace wcv

#endif  // WCV_WECHARM_H_
