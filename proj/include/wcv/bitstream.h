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

#ifndef WCV_BITSTREAM_H_
#define WCV_BITSTREAM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wcv/classical.h"
#include "wcv/graph.h"
#include "wcv/manifest.h"
#include "wcv/wavelet.h"
#include "wcv/wecharm.h"

namespace wcv {

inline constexpr uint8_t kBitstreamVersion = 1;

enum class CodecMode : uint8_t { kNeural = 0, kClassical = 1 };

// "WCVN" | version | mode | wavelet | slices | width u32 | height u32 |
// mode block | z, LF, HF segments (u32 length each). The mode block is the
// model digest (neural) or qstep, level count and sigma table (classical).
struct Bitstream {
  CodecMode mode = CodecMode::kClassical;
  WaveletKind wavelet = WaveletKind::kCdf53;
  uint8_t slices = 0;
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> mode_block;
  std::vector<uint8_t> z;
  std::vector<uint8_t> lf;
  std::vector<uint8_t> hf;
};

std::vector<uint8_t> WriteBitstream(const Bitstream& stream);
Bitstream ReadBitstream(std::span<const uint8_t> bytes);

struct EncodeOptions {
  CodecMode mode = CodecMode::kClassical;
  ClassicalOptions classical;
  const Model* model = nullptr;  // required in neural mode
};

struct EncodedImage {
  std::vector<uint8_t> bytes;
  // Model entropy of the coded symbols plus the exact size of everything
  // stored verbatim (header, tables, length fields).
  double estimated_bits = 0.0;
  double bpp = 0.0;
};

// `image` is 3 x H x W with 8-bit sample values.
EncodedImage EncodeImage(const Tensor& image, const EncodeOptions& options);
// Returns the reconstruction rounded and clamped to 8-bit sample values.
Tensor DecodeImage(std::span<const uint8_t> bytes, const Model* model = nullptr);

EncodedImage EncodeFile(const std::string& image_path, const std::string& out_path,
                        const EncodeOptions& options);
void DecodeFile(const std::string& in_path, const std::string& image_path,
                const Model* model = nullptr);

double BitsPerPixel(size_t file_bytes, uint32_t width, uint32_t height);

}  // namespace wcv

#endif  // WCV_BITSTREAM_H_
