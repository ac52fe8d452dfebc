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

#include "wcv/bitstream.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcv/byte_io.h"
#include "wcv/error.h"
#include "wcv/image_io.h"

namespace wcv {
namespace {

constexpr char kMagic[4] = {'W', 'C', 'V', 'N'};
constexpr int kImageChannels = 3;

int RoundUp(int v, int multiple) { return (v + multiple - 1) / multiple * multiple; }

// Length of the classical mode block, which is self-describing.
size_t ClassicalBlockSize(ByteReader probe) {
  probe.F32();
  const int levels = probe.U8();
  return 5 + 4 * size_t(kImageChannels) * (1 + 3 * size_t(levels));
}

Tensor ToPixels(Tensor x) {
  for (float& v : x.values()) v = std::clamp(std::round(v), 0.0f, 255.0f);
  return x;
}

}  // namespace

std::vector<uint8_t> WriteBitstream(const Bitstream& s) {
  ByteWriter out;
  out.Bytes(std::span(reinterpret_cast<const uint8_t*>(kMagic), 4));
  out.U8(kBitstreamVersion);
  out.U8(uint8_t(s.mode));
  out.U8(uint8_t(s.wavelet));
  out.U8(s.slices);
  out.U32(s.width);
  out.U32(s.height);
  out.Bytes(s.mode_block);
  out.Segment(s.z);
  out.Segment(s.lf);
  out.Segment(s.hf);
  return out.Take();
}

Bitstream ReadBitstream(std::span<const uint8_t> bytes) {
  const size_t head = std::min<size_t>(bytes.size(), 4);
  if (!std::equal(kMagic, kMagic + head, bytes.begin())) {
    Fail(ErrorKind::kBadMagic, "not a WCVN bitstream");
  }
  if (head < 4) Fail(ErrorKind::kDecodingError, "bitstream truncated in the magic");
  ByteReader in(bytes.subspan(4));
  const uint8_t version = in.U8();
  if (version != kBitstreamVersion) {
    Fail(ErrorKind::kVersionUnsupported, "bitstream version " + std::to_string(version));
  }
  Bitstream s;
  const uint8_t mode = in.U8();
  if (mode > 1) Fail(ErrorKind::kDecodingError, "unknown codec mode");
  s.mode = CodecMode(mode);
  s.wavelet = WaveletFromCode(in.U8());
  s.slices = in.U8();
  s.width = in.U32();
  s.height = in.U32();
  if (s.width == 0 || s.height == 0 || s.width > (1u << 20) || s.height > (1u << 20)) {
    Fail(ErrorKind::kDecodingError, "implausible image dimensions");
  }
  const size_t block = s.mode == CodecMode::kNeural ? sizeof(ModelDigest)
                                                    : ClassicalBlockSize(in);
  const auto mb = in.Bytes(block);
  s.mode_block.assign(mb.begin(), mb.end());
  for (auto* seg : {&s.z, &s.lf, &s.hf}) {
    const auto b = in.Segment();
    seg->assign(b.begin(), b.end());
  }
  if (in.remaining() != 0) {
    Fail(ErrorKind::kDecodingError, "trailing bytes after the HF segment");
  }
  return s;
}

double BitsPerPixel(size_t file_bytes, uint32_t width, uint32_t height) {
  return 8.0 * double(file_bytes) / (double(width) * double(height));
}

EncodedImage EncodeImage(const Tensor& image, const EncodeOptions& options) {
  if (image.channels() != kImageChannels || image.empty()) {
    Fail(ErrorKind::kShapeMismatch, "expected an RGB image, got " + ToString(image.shape()));
  }
  Bitstream s;
  s.mode = options.mode;
  s.width = uint32_t(image.width());
  s.height = uint32_t(image.height());
  double entropy_bits = 0.0;
  size_t coded_bytes = 0;
  if (options.mode == CodecMode::kClassical) {
    ClassicalStreams cs = ClassicalEncode(image, options.classical);
    s.wavelet = options.classical.wavelet;
    s.mode_block = std::move(cs.block);
    s.lf = std::move(cs.lf);
    s.hf = std::move(cs.hf);
    entropy_bits = cs.estimated_bits;
    coded_bytes = s.lf.size() + s.hf.size();
  } else {
    if (options.model == nullptr) {
      Fail(ErrorKind::kPreconditionViolation, "neural mode needs a model");
    }
    const Model& model = *options.model;
    s.wavelet = model.hyper.wavelet;
    s.slices = uint8_t(model.hyper.slices);
    s.mode_block.assign(model.digest.begin(), model.digest.end());
    const Tensor padded =
        PadReplicate(image, RoundUp(image.height(), kTileSize),
                     RoundUp(image.width(), kTileSize));
    NeuralStreams ns = NeuralEncode(NormalizePixels(padded), model);
    s.z = std::move(ns.z);
    s.lf = std::move(ns.lf);
    s.hf = std::move(ns.hf);
    entropy_bits = ns.report.estimated_bits();
    coded_bytes = ns.report.payload_bytes();
  }
  EncodedImage out;
  out.bytes = WriteBitstream(s);
  out.estimated_bits = entropy_bits + 8.0 * double(out.bytes.size() - coded_bytes);
  out.bpp = BitsPerPixel(out.bytes.size(), s.width, s.height);
  return out;
}

Tensor DecodeImage(std::span<const uint8_t> bytes, const Model* model) {
  const Bitstream s = ReadBitstream(bytes);
  const Shape shape{kImageChannels, int(s.height), int(s.width)};
  if (s.mode == CodecMode::kClassical) {
    if (!s.z.empty()) Fail(ErrorKind::kDecodingError, "classical stream carries z");
    return ToPixels(ClassicalDecode(s.mode_block, s.lf, s.hf, s.wavelet, shape));
  }
  if (model == nullptr) {
    Fail(ErrorKind::kModelMismatch, "neural stream needs the model it was coded with");
  }
  if (!std::equal(s.mode_block.begin(), s.mode_block.end(), model->digest.begin())) {
    Fail(ErrorKind::kModelMismatch, "stream was coded with a different model");
  }
  if (s.wavelet != model->hyper.wavelet || s.slices != model->hyper.slices) {
    Fail(ErrorKind::kModelMismatch, "stream header disagrees with the model");
  }
  const NeuralStreams ns{s.z, s.lf, s.hf, {}};
  const int ph = RoundUp(shape.height, kTileSize);
  const int pw = RoundUp(shape.width, kTileSize);
  const Tensor x = NeuralDecode(ns, ph, pw, *model);
  return ToPixels(Crop(DenormalizePixels(x), shape.height, shape.width));
}

EncodedImage EncodeFile(const std::string& image_path, const std::string& out_path,
                        const EncodeOptions& options) {
  EncodedImage encoded = EncodeImage(ReadImage(image_path), options);
  WriteFileBytes(out_path, encoded.bytes);
  return encoded;
}

void DecodeFile(const std::string& in_path, const std::string& image_path,
                const Model* model) {
  WriteImage(image_path, DecodeImage(ReadFileBytes(in_path), model));
}

}  // namespace wcv
