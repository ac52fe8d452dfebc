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

#ifndef WCV_GRAPH_H_
#define WCV_GRAPH_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wcv/manifest.h"
#include "wcv/nn.h"
#include "wcv/tensor.h"
#include "wcv/wavelet.h"

namespace wcv {

// Images are padded to a multiple of this before analysis: x32 for the
// latent transform times x4 for the hyperprior.
inline constexpr int kTileSize = 128;
inline constexpr int kResidualBlocksPerGroup = 3;

struct WeConvParams {
  ConvParams stem;  // stride 2, transposed for the inverse layer
  std::vector<ConvParams> lf_convs;
  std::vector<ConvParams> hf_convs;
  GdnParams gdn;
  ConvParams shortcut;  // 1x1 with the stem's stride
  WaveletKind wavelet = WaveletKind::kHaar;
  // Without the wavelet, lf_convs run on the whole stem output and hf_convs
  // must be empty.
  bool use_dwt = true;
};

Tensor WeConvForward(const Tensor& x, const WeConvParams& p);
Tensor IWeConvForward(const Tensor& x, const WeConvParams& p);

struct ResGroupParams {
  std::vector<ResidualBlockParams> blocks;
};

Tensor ResGroup(const Tensor& x, const ResGroupParams& p);

struct LatentPair {
  Tensor y_l;  // M x h x w
  Tensor y_h;  // 3M x h x w, packed [HL | LH | HH]
};

Tensor PackHighBands(const Tensor& hl, const Tensor& lh, const Tensor& hh);
// Inverse of PackHighBands; y_h.channels must be divisible by 3.
std::array<Tensor, 3> UnpackHighBands(const Tensor& y_h);

struct SideInfo {
  Tensor l_mean;
  Tensor l_scale;
  Tensor h_mean;
  Tensor h_scale;
};

struct SliceNetParams {
  std::array<ConvParams, 3> convs;
  ConvParams mean;
  ConvParams scale;
};

struct Model {
  Hyperparams hyper;
  ModelDigest digest{};
  std::optional<CdfTable> z_cdf;

  std::array<WeConvParams, 3> ga_weconv;
  std::array<ResGroupParams, 3> ga_groups;
  ConvParams ga_out;

  ConvParams gs_in;
  std::array<ResGroupParams, 3> gs_groups;
  std::array<WeConvParams, 3> gs_weconv;

  ConvParams ha_in;
  WeConvParams ha_weconv;
  ConvParams ha_out;

  ConvParams hs_in;
  WeConvParams hs_weconv;
  ConvParams hs_l_mean;
  ConvParams hs_l_scale;
  ConvParams hs_h_mean;
  ConvParams hs_h_scale;

  std::vector<SliceNetParams> charm_l;
  std::vector<SliceNetParams> charm_h;

  static Model FromManifest(const ModelManifest& manifest);
};

// Image in [-1, 1], dims a multiple of kTileSize.
LatentPair Analysis(const Tensor& image, const Model& model);
// Returns the normalised image at padded size.
Tensor Synthesis(const LatentPair& latents, const Model& model);
Tensor HyperAnalysis(const LatentPair& latents, const Model& model);
SideInfo HyperSynthesis(const Tensor& z_hat, const Model& model);

// Pixel values 0..255 <-> [-1, 1].
Tensor NormalizePixels(const Tensor& image);
Tensor DenormalizePixels(const Tensor& x);

// Tensor names a manifest must provide for `hyper`, in a canonical order.
// Subband convolution chains may be longer than the single layer listed.
std::vector<std::string> RequiredTensorNames(const Hyperparams& hyper);

// Manifest with every tensor of the default architecture drawn from a seeded
// generator, scaled so activations stay bounded.
ModelManifest RandomManifest(const Hyperparams& hyper, uint64_t seed);

}  // namespace wcv

#endif  // WCV_GRAPH_H_
