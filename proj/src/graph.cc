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

#include "wcv/graph.h"

#include <cmath>
#include <random>
#include <string>

#include "wcv/error.h"

namespace wcv {
namespace {

// Analysis / synthesis stages alternate WeConv and ResGroup.
constexpr int kWeConvStages = 3;

std::string Stage(const std::string& net, int k) {
  return net + ".stage" + std::to_string(k);
}

Tensor ConvChain(Tensor x, const std::vector<ConvParams>& chain) {
  for (const auto& p : chain) x = Conv2d(x, p);
  return x;
}

void AddInPlace(Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    Fail(ErrorKind::kShapeMismatch,
         "cannot add " + ToString(b.shape()) + " to " + ToString(a.shape()));
  }
  for (size_t i = 0; i < a.size(); ++i) a.values()[i] += b.values()[i];
}

Tensor ApplySubbandConvs(const Tensor& s, const WeConvParams& p) {
  if (!p.use_dwt) return ConvChain(s, p.lf_convs);
  if (s.height() < 2 || s.width() < 2) {
    Fail(ErrorKind::kDegenerateInput,
         "WeConv stem output " + ToString(s.shape()) + " is below 2x2");
  }
  SubbandSet bands = Dwt2d(s, p.wavelet);
  bands.ll = ConvChain(bands.ll, p.lf_convs);
  const Tensor hf = ConvChain(PackHighBands(bands.hl, bands.lh, bands.hh), p.hf_convs);
  auto [hl, lh, hh] = UnpackHighBands(hf);
  bands.hl = std::move(hl);
  bands.lh = std::move(lh);
  bands.hh = std::move(hh);
  return Idwt2d(bands);
}

Tensor WeConvCommon(const Tensor& x, const WeConvParams& p) {
  if (x.channels() != p.stem.in_channels ||
      x.channels() != p.shortcut.in_channels) {
    Fail(ErrorKind::kShapeMismatch,
         "WeConv expects " + std::to_string(p.stem.in_channels) +
             " channels, got " + ToString(x.shape()));
  }
  Tensor out = Gdn(ApplySubbandConvs(Conv2d(x, p.stem), p), p.gdn);
  AddInPlace(out, Conv2d(x, p.shortcut));
  return out;
}

// Reads "<prefix>.kernel" / "<prefix>.bias". Output width and kernel size
// come from the stored shape unless pinned.
ConvParams ReadConv(const ModelManifest& m, const std::string& prefix, int in,
                    int stride, bool transposed, int out = -1, int k = -1) {
  const auto& e = m.Find(prefix + ".kernel");
  if (e.shape.size() != 4 || e.shape[1] != in || e.shape[2] != e.shape[3] ||
      (out >= 0 && e.shape[0] != out) || (k >= 0 && e.shape[2] != k)) {
    Fail(ErrorKind::kBadShape, "tensor " + prefix + ".kernel has an unexpected shape");
  }
  ConvParams p = ConvParams::Zeros(e.shape[0], in, e.shape[2], stride, transposed);
  const auto kernel = m.Get(prefix + ".kernel", e.shape);
  p.kernel.assign(kernel.begin(), kernel.end());
  const auto bias = m.Get(prefix + ".bias", {e.shape[0]});
  p.bias.assign(bias.begin(), bias.end());
  return p;
}

std::vector<ConvParams> ReadChain(const ModelManifest& m, const std::string& prefix,
                                  int channels) {
  std::vector<ConvParams> chain;
  int width = channels;
  for (int j = 0; j == 0 || m.Has(prefix + std::to_string(j) + ".kernel"); ++j) {
    chain.push_back(ReadConv(m, prefix + std::to_string(j), width, 1, false));
    width = chain.back().out_channels;
  }
  if (width != channels) {
    Fail(ErrorKind::kBadShape, prefix + " chain must return to " +
                                   std::to_string(channels) + " channels");
  }
  return chain;
}

GdnParams ReadGdn(const ModelManifest& m, const std::string& prefix, int c,
                  bool inverse) {
  GdnParams g;
  const auto beta = m.Get(prefix + ".beta", {c});
  const auto gamma = m.Get(prefix + ".gamma", {c, c});
  g.beta.assign(beta.begin(), beta.end());
  g.gamma.assign(gamma.begin(), gamma.end());
  g.inverse = inverse;
  for (float b : g.beta) {
    if (!(b >= kGdnBetaMin)) Fail(ErrorKind::kBadShape, prefix + ".beta below minimum");
  }
  for (float v : g.gamma) {
    if (!(v >= 0.0f)) Fail(ErrorKind::kBadShape, prefix + ".gamma must be non-negative");
  }
  return g;
}

WeConvParams ReadWeConv(const ModelManifest& m, const std::string& prefix, int in,
                        int out, bool transposed) {
  WeConvParams p;
  p.wavelet = m.hyper.wavelet;
  p.use_dwt = m.hyper.weconv;
  p.stem = ReadConv(m, prefix, in, 2, transposed, out, 3);
  p.lf_convs = ReadChain(m, prefix + ".lf", out);
  if (p.use_dwt) p.hf_convs = ReadChain(m, prefix + ".hf", 3 * out);
  p.gdn = ReadGdn(m, prefix + ".gdn", out, transposed);
  p.shortcut = ReadConv(m, prefix + ".shortcut", in, 2, transposed, out, 1);
  return p;
}

ResGroupParams ReadGroup(const ModelManifest& m, const std::string& prefix, int c) {
  ResGroupParams g;
  for (int b = 0; b < kResidualBlocksPerGroup; ++b) {
    const std::string block = prefix + ".block" + std::to_string(b);
    ResidualBlockParams r;
    r.conv0 = ReadConv(m, block + ".conv0", c, 1, false, -1, 3);
    r.conv1 = ReadConv(m, block + ".conv1", r.conv0.out_channels, 1, false, c, 3);
    r.slope = m.hyper.leaky_slope;
    g.blocks.push_back(std::move(r));
  }
  return g;
}

SliceNetParams ReadSliceNet(const ModelManifest& m, const std::string& prefix,
                            int in, int out) {
  SliceNetParams p;
  int width = in;
  for (int j = 0; j < 3; ++j) {
    p.convs[j] = ReadConv(m, prefix + ".conv" + std::to_string(j), width, 1, false, -1, 3);
    width = p.convs[j].out_channels;
  }
  p.mean = ReadConv(m, prefix + ".mean", width, 1, false, out, 3);
  p.scale = ReadConv(m, prefix + ".scale", width, 1, false, out, 3);
  return p;
}

// Latent geometry shared by the loader, the name list and the generator.
struct Dims {
  int n, m, k, band_channels, hyper_in, lf_slice, hf_slice;
  bool wavelet_domain;
};

Dims DimsFor(const Hyperparams& h) {
  if (h.n <= 0 || h.m <= 0 || h.slices <= 0) {
    Fail(ErrorKind::kBadShape, "hyperparameters must be positive");
  }
  if (h.m % h.slices != 0) {
    Fail(ErrorKind::kShapeMismatch, "M = " + std::to_string(h.m) +
                                        " is not divisible into " +
                                        std::to_string(h.slices) + " slices");
  }
  Dims d;
  d.n = h.n;
  d.m = h.m;
  d.k = h.slices;
  d.wavelet_domain = h.wecharm;
  d.band_channels = h.m;
  d.hyper_in = h.wecharm ? 4 * h.m : h.m;
  d.lf_slice = h.m / h.slices;
  d.hf_slice = 3 * h.m / h.slices;
  return d;
}

enum class Role { kKernel, kResidualKernel, kSubbandKernel, kShortcutKernel, kBias,
                  kGdnBeta, kGdnGamma };

struct TensorSpec {
  std::string name;
  std::vector<int> shape;
  Role role;
};

class Architecture {
 public:
  Architecture(const Hyperparams& h, int chain_depth)
      : h_(h), depth_(chain_depth) {
    const Dims d = DimsFor(h);
    WeConv(Stage("ga", 0), 3, d.n);
    Group(Stage("ga", 1), d.n);
    WeConv(Stage("ga", 2), d.n, d.n);
    Group(Stage("ga", 3), d.n);
    WeConv(Stage("ga", 4), d.n, d.n);
    Group(Stage("ga", 5), d.n);
    Conv(Stage("ga", 6), d.m, d.n, 3);

    Conv(Stage("gs", 0), d.n, d.m, 3);
    Group(Stage("gs", 1), d.n);
    WeConv(Stage("gs", 2), d.n, d.n);
    Group(Stage("gs", 3), d.n);
    WeConv(Stage("gs", 4), d.n, d.n);
    Group(Stage("gs", 5), d.n);
    WeConv(Stage("gs", 6), d.n, 3);

    Conv(Stage("ha", 0), d.n, d.hyper_in, 3);
    WeConv(Stage("ha", 1), d.n, d.n);
    Conv(Stage("ha", 2), d.n, d.n, 3);

    Conv(Stage("hs", 0), d.n, d.n, 3);
    WeConv(Stage("hs", 1), d.n, d.n);
    Conv("hs.head.l_mean", d.m, d.n, 3);
    Conv("hs.head.l_scale", d.m, d.n, 3);
    if (d.wavelet_domain) {
      Conv("hs.head.h_mean", 3 * d.m, d.n, 3);
      Conv("hs.head.h_scale", 3 * d.m, d.n, 3);
    }

    for (int i = 0; i < d.k; ++i) {
      SliceNet("charm.L.slice" + std::to_string(i), 2 * d.m + i * d.lf_slice,
               d.lf_slice);
    }
    if (d.wavelet_domain) {
      for (int i = 0; i < d.k; ++i) {
        SliceNet("charm.H.slice" + std::to_string(i),
                 6 * d.m + d.m + i * d.hf_slice, d.hf_slice);
      }
    }
  }

  const std::vector<TensorSpec>& specs() const { return specs_; }

 private:
  void Conv(const std::string& prefix, int out, int in, int k,
            Role role = Role::kKernel) {
    specs_.push_back({prefix + ".kernel", {out, in, k, k}, role});
    specs_.push_back({prefix + ".bias", {out}, Role::kBias});
  }
  void WeConv(const std::string& prefix, int in, int out) {
    Conv(prefix, out, in, 3);
    for (int j = 0; j < depth_; ++j) {
      Conv(prefix + ".lf" + std::to_string(j), out, out, 3, Role::kSubbandKernel);
    }
    if (h_.weconv) {
      for (int j = 0; j < depth_; ++j) {
        Conv(prefix + ".hf" + std::to_string(j), 3 * out, 3 * out, 3,
             Role::kSubbandKernel);
      }
    }
    specs_.push_back({prefix + ".gdn.beta", {out}, Role::kGdnBeta});
    specs_.push_back({prefix + ".gdn.gamma", {out, out}, Role::kGdnGamma});
    Conv(prefix + ".shortcut", out, in, 1, Role::kShortcutKernel);
  }
  void Group(const std::string& prefix, int c) {
    for (int b = 0; b < kResidualBlocksPerGroup; ++b) {
      const std::string block = prefix + ".block" + std::to_string(b);
      Conv(block + ".conv0", c, c, 3);
      Conv(block + ".conv1", c, c, 3, Role::kResidualKernel);
    }
  }
  void SliceNet(const std::string& prefix, int in, int out) {
    const int hidden = h_.n;
    Conv(prefix + ".conv0", hidden, in, 3);
    Conv(prefix + ".conv1", hidden, hidden, 3);
    Conv(prefix + ".conv2", hidden, hidden, 3);
    Conv(prefix + ".mean", out, hidden, 3);
    Conv(prefix + ".scale", out, hidden, 3);
  }

  Hyperparams h_;
  int depth_;
  std::vector<TensorSpec> specs_;
};

}  // namespace

Tensor WeConvForward(const Tensor& x, const WeConvParams& p) {
  if (p.stem.transposed || p.stem.stride != 2) {
    Fail(ErrorKind::kShapeMismatch, "WeConv needs a stride-2 convolution stem");
  }
  return WeConvCommon(x, p);
}

Tensor IWeConvForward(const Tensor& x, const WeConvParams& p) {
  if (!p.stem.transposed || p.stem.stride != 2) {
    Fail(ErrorKind::kShapeMismatch, "IWeConv needs a stride-2 transposed stem");
  }
  return WeConvCommon(x, p);
}

Tensor ResGroup(const Tensor& x, const ResGroupParams& p) {
  Tensor out = x;
  for (const auto& block : p.blocks) out = ResidualBlock(out, block);
  return out;
}

Tensor PackHighBands(const Tensor& hl, const Tensor& lh, const Tensor& hh) {
  if (hl.shape() != lh.shape() || hl.shape() != hh.shape()) {
    Fail(ErrorKind::kShapeMismatch, "high bands disagree in shape");
  }
  return ConcatChannels({&hl, &lh, &hh});
}

std::array<Tensor, 3> UnpackHighBands(const Tensor& y_h) {
  if (y_h.channels() % 3 != 0) {
    Fail(ErrorKind::kShapeMismatch,
         "packed high bands need a multiple of 3 channels, got " +
             ToString(y_h.shape()));
  }
  const int c = y_h.channels() / 3;
  return {SliceChannels(y_h, 0, c), SliceChannels(y_h, c, c),
          SliceChannels(y_h, 2 * c, c)};
}

Model Model::FromManifest(const ModelManifest& m) {
  const Dims d = DimsFor(m.hyper);
  Model model;
  model.hyper = m.hyper;
  model.digest = m.digest();
  model.z_cdf = m.z_cdf;

  int in = 3;
  for (int s = 0; s < kWeConvStages; ++s) {
    model.ga_weconv[s] = ReadWeConv(m, Stage("ga", 2 * s), in, d.n, false);
    model.ga_groups[s] = ReadGroup(m, Stage("ga", 2 * s + 1), d.n);
    in = d.n;
  }
  model.ga_out = ReadConv(m, Stage("ga", 6), d.n, 2, false, d.m, 3);

  model.gs_in = ReadConv(m, Stage("gs", 0), d.m, 2, true, d.n, 3);
  for (int s = 0; s < kWeConvStages; ++s) {
    model.gs_groups[s] = ReadGroup(m, Stage("gs", 2 * s + 1), d.n);
    model.gs_weconv[s] = ReadWeConv(m, Stage("gs", 2 * s + 2), d.n,
                                    s + 1 == kWeConvStages ? 3 : d.n, true);
  }

  model.ha_in = ReadConv(m, Stage("ha", 0), d.hyper_in, 1, false, d.n, 3);
  model.ha_weconv = ReadWeConv(m, Stage("ha", 1), d.n, d.n, false);
  model.ha_out = ReadConv(m, Stage("ha", 2), d.n, 2, false, d.n, 3);

  model.hs_in = ReadConv(m, Stage("hs", 0), d.n, 2, true, d.n, 3);
  model.hs_weconv = ReadWeConv(m, Stage("hs", 1), d.n, d.n, true);
  model.hs_l_mean = ReadConv(m, "hs.head.l_mean", d.n, 1, false, d.m, 3);
  model.hs_l_scale = ReadConv(m, "hs.head.l_scale", d.n, 1, false, d.m, 3);
  if (d.wavelet_domain) {
    model.hs_h_mean = ReadConv(m, "hs.head.h_mean", d.n, 1, false, 3 * d.m, 3);
    model.hs_h_scale = ReadConv(m, "hs.head.h_scale", d.n, 1, false, 3 * d.m, 3);
  }

  for (int i = 0; i < d.k; ++i) {
    model.charm_l.push_back(ReadSliceNet(m, "charm.L.slice" + std::to_string(i),
                                         2 * d.m + i * d.lf_slice, d.lf_slice));
  }
  if (d.wavelet_domain) {
    for (int i = 0; i < d.k; ++i) {
      model.charm_h.push_back(ReadSliceNet(m, "charm.H.slice" + std::to_string(i),
                                           7 * d.m + i * d.hf_slice, d.hf_slice));
    }
  }
  return model;
}

LatentPair Analysis(const Tensor& image, const Model& model) {
  if (image.channels() != 3 || image.height() < kTileSize ||
      image.width() < kTileSize || image.height() % kTileSize != 0 ||
      image.width() % kTileSize != 0) {
    Fail(ErrorKind::kDegenerateInput,
         "analysis needs a 3-channel image tiled by " + std::to_string(kTileSize) +
             ", got " + ToString(image.shape()));
  }
  Tensor x = image;
  for (int s = 0; s < kWeConvStages; ++s) {
    x = WeConvForward(x, model.ga_weconv[s]);
    x = ResGroup(x, model.ga_groups[s]);
  }
  Tensor y = Conv2d(x, model.ga_out);
  if (!model.hyper.wecharm) return {std::move(y), Tensor(0, y.height(), y.width())};
  SubbandSet bands = Dwt2d(y, model.hyper.wavelet);
  return {std::move(bands.ll), PackHighBands(bands.hl, bands.lh, bands.hh)};
}

Tensor Synthesis(const LatentPair& latents, const Model& model) {
  Tensor y;
  if (model.hyper.wecharm) {
    if (latents.y_h.channels() != 3 * latents.y_l.channels() ||
        latents.y_h.height() != latents.y_l.height() ||
        latents.y_h.width() != latents.y_l.width()) {
      Fail(ErrorKind::kShapeMismatch, "LF " + ToString(latents.y_l.shape()) +
                                          " and HF " + ToString(latents.y_h.shape()) +
                                          " do not pair up");
    }
    auto [hl, lh, hh] = UnpackHighBands(latents.y_h);
    SubbandSet bands{latents.y_l, std::move(hl), std::move(lh), std::move(hh),
                     model.hyper.wavelet, 2 * latents.y_l.height(),
                     2 * latents.y_l.width()};
    y = Idwt2d(bands);
  } else {
    y = latents.y_l;
  }
  if (y.channels() != model.hyper.m) {
    Fail(ErrorKind::kShapeMismatch, "latent has " + std::to_string(y.channels()) +
                                        " channels, model expects " +
                                        std::to_string(model.hyper.m));
  }
  Tensor x = Conv2d(y, model.gs_in);
  LeakyReluInPlace(x, model.hyper.leaky_slope);
  for (int s = 0; s < kWeConvStages; ++s) {
    x = ResGroup(x, model.gs_groups[s]);
    x = IWeConvForward(x, model.gs_weconv[s]);
  }
  return x;
}

Tensor HyperAnalysis(const LatentPair& latents, const Model& model) {
  Tensor x = model.hyper.wecharm ? ConcatChannels({&latents.y_l, &latents.y_h})
                                 : latents.y_l;
  x = Conv2d(x, model.ha_in);
  LeakyReluInPlace(x, model.hyper.leaky_slope);
  x = WeConvForward(x, model.ha_weconv);
  return Conv2d(x, model.ha_out);
}

SideInfo HyperSynthesis(const Tensor& z_hat, const Model& model) {
  Tensor x = Conv2d(z_hat, model.hs_in);
  LeakyReluInPlace(x, model.hyper.leaky_slope);
  x = IWeConvForward(x, model.hs_weconv);
  auto positive = [](Tensor t) {
    for (float& v : t.values()) v = Softplus(v);
    return t;
  };
  SideInfo side;
  side.l_mean = Conv2d(x, model.hs_l_mean);
  side.l_scale = positive(Conv2d(x, model.hs_l_scale));
  if (model.hyper.wecharm) {
    side.h_mean = Conv2d(x, model.hs_h_mean);
    side.h_scale = positive(Conv2d(x, model.hs_h_scale));
  }
  return side;
}

Tensor NormalizePixels(const Tensor& image) {
  Tensor out = image;
  for (float& v : out.values()) v = v / 127.5f - 1.0f;
  return out;
}

Tensor DenormalizePixels(const Tensor& x) {
  Tensor out = x;
  for (float& v : out.values()) v = (v + 1.0f) * 127.5f;
  return out;
}

std::vector<std::string> RequiredTensorNames(const Hyperparams& hyper) {
  std::vector<std::string> names;
  const Architecture arch(hyper, 1);
  for (const auto& s : arch.specs()) names.push_back(s.name);
  return names;
}

ModelManifest RandomManifest(const Hyperparams& hyper, uint64_t seed) {
  constexpr int kChainDepth = 2;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> unit(-1.0f, 1.0f);
  ModelManifest m;
  m.hyper = hyper;
  const Architecture arch(hyper, kChainDepth);
  for (const auto& spec : arch.specs()) {
    size_t count = 1;
    for (int d : spec.shape) count *= size_t(d);
    std::vector<float> v(count, 0.0f);
    const int fan_in = spec.shape.size() == 4
                           ? spec.shape[1] * spec.shape[2] * spec.shape[3]
                           : 1;
    const float bound = std::sqrt(3.0f / float(fan_in));
    switch (spec.role) {
      case Role::kKernel:
        for (float& w : v) w = bound * unit(rng);
        break;
      case Role::kResidualKernel:
        for (float& w : v) w = 0.1f * bound * unit(rng);
        break;
      case Role::kShortcutKernel:
        for (float& w : v) w = 0.5f * bound * unit(rng);
        break;
      case Role::kSubbandKernel: {
        const int c = spec.shape[0];
        const int k = spec.shape[2];
        for (float& w : v) w = 0.05f * bound * unit(rng);
        for (int o = 0; o < c; ++o) {
          v[((size_t(o) * c + o) * k + k / 2) * k + k / 2] += 1.0f;
        }
        break;
      }
      case Role::kBias:
        break;
      case Role::kGdnBeta:
        std::fill(v.begin(), v.end(), 1.0f);
        break;
      case Role::kGdnGamma: {
        const int c = spec.shape[0];
        for (float& w : v) w = 0.001f * (unit(rng) + 1.0f);
        for (int i = 0; i < c; ++i) v[size_t(i) * c + i] = 0.1f;
        break;
      }
    }
    m.Add(spec.name, spec.shape, v);
  }
  m.Serialize();
  return m;
}

}  // namespace wcv
