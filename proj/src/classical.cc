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

#include "wcv/classical.h"

#include <cmath>
#include <string>

#include "wcv/byte_io.h"
#include "wcv/error.h"
#include "wcv/range_coder.h"

namespace wcv {
namespace {

constexpr float kLevelShift = 128.0f;
constexpr int kMaxLevels = 16;

// One coded band with the extent that carries coefficients.
struct BandView {
  Tensor* t;
  int height;
  int width;
};

// LL of the coarsest level, then coarse to fine HL, LH, HH.
std::vector<BandView> CodingOrder(Pyramid& p) {
  std::vector<BandView> order;
  const int levels = int(p.levels.size());
  {
    SubbandSet& s = p.levels.back();
    order.push_back({&s.ll, (s.src_height + 1) / 2, (s.src_width + 1) / 2});
  }
  for (int l = levels - 1; l >= 0; --l) {
    SubbandSet& s = p.levels[size_t(l)];
    const int hi_h = (s.src_height + 1) / 2;
    const int hi_w = (s.src_width + 1) / 2;
    order.push_back({&s.hl, hi_h, s.src_width / 2});
    order.push_back({&s.lh, s.src_height / 2, hi_w});
    order.push_back({&s.hh, s.src_height / 2, s.src_width / 2});
  }
  return order;
}

void CheckGeometry(const Shape& shape, int levels) {
  if (levels < 1 || levels > kMaxLevels) {
    Fail(ErrorKind::kPreconditionViolation,
         "decomposition levels must lie in [1, " + std::to_string(kMaxLevels) + "]");
  }
  if (shape.channels < 1 || shape.height < (1 << levels) ||
      shape.width < (1 << levels)) {
    Fail(ErrorKind::kDegenerateInput,
         ToString(shape) + " is too small for " + std::to_string(levels) + " levels");
  }
}

void CheckQstep(float qstep, ErrorKind kind) {
  if (!(qstep > 0.0f) || !std::isfinite(qstep)) {
    Fail(kind, "quantiser step must be positive, got " + std::to_string(qstep));
  }
}

// Pyramid of zero bands with the geometry Decompose would produce.
Pyramid EmptyPyramid(const Shape& shape, WaveletKind kind, int levels) {
  Pyramid p;
  int h = shape.height;
  int w = shape.width;
  for (int l = 0; l < levels; ++l) {
    const Tensor zero(shape.channels, (h + 1) / 2, (w + 1) / 2);
    p.levels.push_back({zero, zero, zero, zero, kind, h, w});
    h = (h + 1) / 2;
    w = (w + 1) / 2;
  }
  return p;
}

std::vector<std::vector<int32_t>> QuantizeBands(const Tensor& image,
                                                const ClassicalOptions& o) {
  CheckGeometry(image.shape(), o.levels);
  CheckQstep(o.qstep, ErrorKind::kPreconditionViolation);
  Tensor shifted = image;
  for (float& v : shifted.values()) v -= kLevelShift;
  Pyramid pyramid = Decompose(shifted, o.wavelet, o.levels);
  std::vector<std::vector<int32_t>> planes;
  for (const BandView& band : CodingOrder(pyramid)) {
    for (int c = 0; c < image.channels(); ++c) {
      std::vector<int32_t> q;
      q.reserve(size_t(band.height) * size_t(band.width));
      for (int y = 0; y < band.height; ++y) {
        for (int x = 0; x < band.width; ++x) {
          const double v = std::round(double(band.t->at(c, y, x)) / o.qstep);
          if (v < kClassicalRange.min || v > kClassicalRange.max) {
            Fail(ErrorKind::kPreconditionViolation,
                 "quantiser step too small for the symbol range");
          }
          q.push_back(int32_t(v));
        }
      }
      planes.push_back(std::move(q));
    }
  }
  return planes;
}

}  // namespace

Pyramid Decompose(const Tensor& x, WaveletKind kind, int levels) {
  CheckGeometry(x.shape(), levels);
  Pyramid p;
  const Tensor* src = &x;
  for (int l = 0; l < levels; ++l) {
    p.levels.push_back(Dwt2d(*src, kind));
    src = &p.levels.back().ll;
  }
  return p;
}

Tensor Reconstruct(const Pyramid& pyramid) {
  if (pyramid.levels.empty()) Fail(ErrorKind::kShapeMismatch, "empty pyramid");
  Tensor ll = Idwt2d(pyramid.levels.back());
  for (size_t l = pyramid.levels.size() - 1; l-- > 0;) {
    SubbandSet s = pyramid.levels[l];
    s.ll = std::move(ll);
    ll = Idwt2d(s);
  }
  return ll;
}

ClassicalStreams ClassicalEncode(const Tensor& image, const ClassicalOptions& options) {
  const auto planes = QuantizeBands(image, options);
  const size_t lf_planes = size_t(image.channels());

  ClassicalStreams out;
  ByteWriter block;
  block.F32(options.qstep);
  block.U8(uint8_t(options.levels));
  RangeEncoder lf;
  RangeEncoder hf;
  for (size_t i = 0; i < planes.size(); ++i) {
    double energy = 0.0;
    for (int32_t q : planes[i]) energy += double(q) * double(q);
    const float sigma =
        planes[i].empty() ? 0.0f : float(std::sqrt(energy / double(planes[i].size())));
    block.F32(sigma);
    GaussianModel model(0.0, sigma, kClassicalRange);
    model.Precompute();
    RangeEncoder& enc = i < lf_planes ? lf : hf;
    for (int32_t q : planes[i]) {
      model.Encode(enc, q);
      out.estimated_bits -= std::log2(GaussianSymbolProb(q, 0.0, sigma, kClassicalRange));
    }
  }
  out.block = block.Take();
  out.lf = lf.Finish();
  out.hf = hf.Finish();
  return out;
}

Tensor ClassicalDecode(std::span<const uint8_t> block, std::span<const uint8_t> lf,
                       std::span<const uint8_t> hf, WaveletKind wavelet,
                       const Shape& shape) {
  ByteReader in(block);
  const float qstep = in.F32();
  CheckQstep(qstep, ErrorKind::kDecodingError);
  const int levels = in.U8();
  try {
    CheckGeometry(shape, levels);
  } catch (const Error& e) {
    Fail(ErrorKind::kDecodingError, e.what());
  }

  Pyramid pyramid = EmptyPyramid(shape, wavelet, levels);
  const auto order = CodingOrder(pyramid);
  RangeDecoder lf_dec(lf);
  RangeDecoder hf_dec(hf);
  for (size_t b = 0; b < order.size(); ++b) {
    const BandView& band = order[b];
    for (int c = 0; c < shape.channels; ++c) {
      const float sigma = in.F32();
      if (!(sigma >= 0.0f) || !std::isfinite(sigma)) {
        Fail(ErrorKind::kDecodingError, "invalid subband deviation");
      }
      GaussianModel model(0.0, sigma, kClassicalRange);
      model.Precompute();
      RangeDecoder& dec = b == 0 ? lf_dec : hf_dec;
      for (int y = 0; y < band.height; ++y) {
        for (int x = 0; x < band.width; ++x) {
          band.t->at(c, y, x) = float(model.Decode(dec)) * qstep;
        }
      }
    }
  }
  if (in.remaining() != 0) Fail(ErrorKind::kDecodingError, "oversized mode block");
  lf_dec.Finish();
  hf_dec.Finish();

  Tensor image = Reconstruct(pyramid);
  for (float& v : image.values()) v += kLevelShift;
  return image;
}

std::vector<int32_t> QuantizedCoefficients(const Tensor& image,
                                           const ClassicalOptions& options) {
  std::vector<int32_t> all;
  for (const auto& plane : QuantizeBands(image, options)) {
    all.insert(all.end(), plane.begin(), plane.end());
  }
  return all;
}

double ZeroFraction(std::span<const int32_t> values) {
  if (values.empty()) return 0.0;
  size_t zeros = 0;
  for (int32_t v : values) zeros += v == 0;
  return double(zeros) / double(values.size());
}

}  // namespace wcv
