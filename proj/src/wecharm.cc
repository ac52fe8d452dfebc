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

#include "wcv/wecharm.h"

#include <algorithm>
#include <string>

#include "wcv/byte_io.h"
#include "wcv/error.h"

namespace wcv {
namespace {

// Bits the container spends on each slice's length prefix.
constexpr double kSegmentPrefixBits = 32.0;

struct Band {
  SliceOrigin origin;
  const Tensor* mean;
  const Tensor* scale;
  const Tensor* lf;
  const std::vector<SliceNetParams>* nets;
};

Band LfBand(const SideInfo& side, const Model& model) {
  return {SliceOrigin::kLf, &side.l_mean, &side.l_scale, nullptr, &model.charm_l};
}

Band HfBand(const Tensor* decoded_lf, const SideInfo& side, const Model& model) {
  if (decoded_lf == nullptr || decoded_lf->empty()) {
    Fail(ErrorKind::kPreconditionViolation,
         "HF slices are conditioned on the decoded LF band");
  }
  if (model.charm_h.empty()) {
    Fail(ErrorKind::kPreconditionViolation, "model has no HF slice networks");
  }
  return {SliceOrigin::kHf, &side.h_mean, &side.h_scale, decoded_lf, &model.charm_h};
}

Shape BandShape(const Band& band) {
  const int k = int(band.nets->size());
  const int per_slice = band.nets->front().mean.out_channels;
  return {k * per_slice, band.mean->height(), band.mean->width()};
}

GaussianParams SliceParams(const Band& band, int i, const std::vector<Tensor>& done,
                           float slope) {
  SliceContext ctx;
  ctx.side_mean = band.mean;
  ctx.side_scale = band.scale;
  ctx.decoded_lf = band.lf;
  for (const Tensor& t : done) ctx.previous.push_back(&t);
  return PredictSliceParams(ctx, (*band.nets)[size_t(i)], slope);
}

BandEncoding EncodeBand(const Tensor& y, const Band& band, const Model& model) {
  const Shape shape = BandShape(band);
  if (y.shape() != shape) {
    Fail(ErrorKind::kShapeMismatch,
         "band " + ToString(y.shape()) + " does not match side info " + ToString(shape));
  }
  const int k = int(band.nets->size());
  const SliceSet set = SplitSlices(y, k, band.origin);
  ByteWriter out;
  std::vector<Tensor> decoded;
  BandEncoding result;
  for (int i = 0; i < k; ++i) {
    GaussianParams params = SliceParams(band, i, decoded, model.hyper.leaky_slope);
    SymbolPlane plane{Quantize(set.slices[size_t(i)], params.mu), std::move(params.mu),
                      std::move(params.sigma), SymbolRange{}};
    ClampSymbols(plane.symbols, plane.range);
    result.estimated_bits += EstimateRate(plane) + kSegmentPrefixBits;
    out.Segment(EncodePlane(plane));
    decoded.push_back(Dequantize(plane.symbols, plane.mu));
  }
  result.bytes = out.Take();
  result.decoded = MergeSlices({std::move(decoded), shape.channels / k, band.origin});
  return result;
}

Tensor DecodeBand(std::span<const uint8_t> bytes, const Band& band,
                  const Model& model, const SliceCallback& on_slice) {
  const Shape shape = BandShape(band);
  const int k = int(band.nets->size());
  ByteReader in(bytes);
  std::vector<Tensor> decoded;
  for (int i = 0; i < k; ++i) {
    const GaussianParams params = SliceParams(band, i, decoded, model.hyper.leaky_slope);
    const SymbolTensor q = DecodePlane(in.Segment(), params.mu, params.sigma);
    decoded.push_back(Dequantize(q, params.mu));
    if (on_slice) on_slice(i, decoded.back());
  }
  if (in.remaining() != 0) {
    Fail(ErrorKind::kDecodingError, "unexpected bytes after the last slice");
  }
  return MergeSlices({std::move(decoded), shape.channels / k, band.origin});
}

Shape LatentShape(const Model& model, int padded_height, int padded_width) {
  const int factor = model.hyper.wecharm ? 32 : 16;
  return {model.hyper.m, padded_height / factor, padded_width / factor};
}

}  // namespace

SliceSet SplitSlices(const Tensor& y, int k, SliceOrigin origin) {
  if (k <= 0 || y.channels() % k != 0) {
    Fail(ErrorKind::kShapeMismatch, std::to_string(y.channels()) +
                                        " channels cannot form " +
                                        std::to_string(k) + " equal slices");
  }
  SliceSet set;
  set.origin = origin;
  set.channels_per_slice = y.channels() / k;
  for (int i = 0; i < k; ++i) {
    set.slices.push_back(SliceChannels(y, i * set.channels_per_slice,
                                       set.channels_per_slice));
  }
  return set;
}

Tensor MergeSlices(const SliceSet& set) {
  std::vector<const Tensor*> parts;
  for (const Tensor& t : set.slices) {
    if (t.channels() != set.channels_per_slice) {
      Fail(ErrorKind::kShapeMismatch, "slice has " + std::to_string(t.channels()) +
                                          " channels, expected " +
                                          std::to_string(set.channels_per_slice));
    }
    parts.push_back(&t);
  }
  return ConcatChannels(parts);
}

GaussianParams PredictSliceParams(const SliceContext& ctx, const SliceNetParams& net,
                                  float slope) {
  if (ctx.side_mean == nullptr || ctx.side_scale == nullptr) {
    Fail(ErrorKind::kPreconditionViolation, "slice context lacks side information");
  }
  std::vector<const Tensor*> inputs{ctx.side_mean, ctx.side_scale};
  if (ctx.decoded_lf != nullptr) inputs.push_back(ctx.decoded_lf);
  inputs.insert(inputs.end(), ctx.previous.begin(), ctx.previous.end());
  Tensor x = ConcatChannels(inputs);
  if (x.channels() != net.convs[0].in_channels) {
    Fail(ErrorKind::kShapeMismatch,
         "slice network expects " + std::to_string(net.convs[0].in_channels) +
             " context channels, got " + std::to_string(x.channels()));
  }
  for (const auto& conv : net.convs) {
    x = Conv2d(x, conv);
    LeakyReluInPlace(x, slope);
  }
  GaussianParams out{Conv2d(x, net.mean), Conv2d(x, net.scale)};
  for (float& s : out.sigma.values()) s = std::max(Softplus(s), kSigmaMin);
  return out;
}

BandEncoding EncodeLf(const Tensor& y_l, const SideInfo& side, const Model& model) {
  return EncodeBand(y_l, LfBand(side, model), model);
}

Tensor DecodeLf(std::span<const uint8_t> bytes, const SideInfo& side,
                const Model& model, const SliceCallback& on_slice) {
  return DecodeBand(bytes, LfBand(side, model), model, on_slice);
}

BandEncoding EncodeHf(const Tensor& y_h, const Tensor* decoded_lf,
                      const SideInfo& side, const Model& model) {
  return EncodeBand(y_h, HfBand(decoded_lf, side, model), model);
}

Tensor DecodeHf(std::span<const uint8_t> bytes, const Tensor* decoded_lf,
                const SideInfo& side, const Model& model,
                const SliceCallback& on_slice) {
  return DecodeBand(bytes, HfBand(decoded_lf, side, model), model, on_slice);
}

NeuralStreams NeuralEncode(const Tensor& image, const Model& model) {
  const LatentPair y = Analysis(image, model);
  const Tensor z = HyperAnalysis(y, model);

  SymbolTensor zq{z.shape(), std::vector<int32_t>(z.size())};
  for (size_t i = 0; i < z.size(); ++i) zq.values[i] = QuantizeValue(z.values()[i], 0.0f);

  NeuralStreams streams;
  ByteWriter zs;
  CdfTable local;
  const CdfTable* table = nullptr;
  if (model.z_cdf) {
    zs.U8(0);
    table = &*model.z_cdf;
    ClampToSupport(zq, *table);
  } else {
    zs.U8(1);
    local = BuildFactorizedCdf(zq);
    WriteCdfTable(local, zs);
    table = &local;
  }
  const double side_bits = 8.0 * double(zs.size());
  double z_bits = 0.0;
  zs.Bytes(EncodeFactorized(zq, *table, &z_bits));
  streams.z = zs.Take();
  streams.report.bits_z = z_bits + side_bits;
  streams.report.bytes_z = streams.z.size();

  Tensor z_hat(z.shape());
  for (size_t i = 0; i < z.size(); ++i) z_hat.values()[i] = float(zq.values[i]);
  const SideInfo side = HyperSynthesis(z_hat, model);

  BandEncoding lf = EncodeLf(y.y_l, side, model);
  streams.lf = std::move(lf.bytes);
  streams.report.bits_yl = lf.estimated_bits;
  streams.report.bytes_yl = streams.lf.size();
  if (model.hyper.wecharm) {
    BandEncoding hf = EncodeHf(y.y_h, &lf.decoded, side, model);
    streams.hf = std::move(hf.bytes);
    streams.report.bits_yh = hf.estimated_bits;
    streams.report.bytes_yh = streams.hf.size();
  }
  return streams;
}

Tensor NeuralDecode(const NeuralStreams& streams, int padded_height,
                    int padded_width, const Model& model) {
  if (padded_height <= 0 || padded_width <= 0 || padded_height % kTileSize != 0 ||
      padded_width % kTileSize != 0) {
    Fail(ErrorKind::kDecodingError, "padded dimensions are not tile multiples");
  }
  const Shape latent = LatentShape(model, padded_height, padded_width);
  const Shape z_shape{model.hyper.n, latent.height / 4, latent.width / 4};

  ByteReader zs(streams.z);
  const uint8_t source = zs.U8();
  CdfTable local;
  const CdfTable* table = nullptr;
  if (source == 0) {
    if (!model.z_cdf) {
      Fail(ErrorKind::kModelMismatch, "stream expects the model's hyperprior CDF");
    }
    table = &*model.z_cdf;
  } else if (source == 1) {
    local = ReadCdfTable(zs);
    table = &local;
  } else {
    Fail(ErrorKind::kDecodingError, "unknown hyperprior CDF source");
  }
  if (table->channels.size() != size_t(z_shape.channels)) {
    Fail(ErrorKind::kDecodingError, "hyperprior CDF has the wrong channel count");
  }
  const SymbolTensor zq = DecodeFactorized(zs.Bytes(zs.remaining()), *table, z_shape);
  Tensor z_hat(z_shape);
  for (size_t i = 0; i < z_hat.size(); ++i) z_hat.values()[i] = float(zq.values[i]);
  const SideInfo side = HyperSynthesis(z_hat, model);

  LatentPair y;
  y.y_l = DecodeLf(streams.lf, side, model);
  if (model.hyper.wecharm) {
    y.y_h = DecodeHf(streams.hf, &y.y_l, side, model);
  } else if (!streams.hf.empty()) {
    Fail(ErrorKind::kDecodingError, "HF segment present for a single-band model");
  }
  return Synthesis(y, model);
}

}  // namespace wcv
