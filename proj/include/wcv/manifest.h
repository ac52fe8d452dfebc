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

#ifndef WCV_MANIFEST_H_
#define WCV_MANIFEST_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wcv/entropy.h"
#include "wcv/nn.h"
#include "wcv/wavelet.h"

namespace wcv {

inline constexpr uint8_t kManifestVersion = 1;

struct Hyperparams {
  int n = 128;        // internal feature width
  int m = 320;        // latent channels
  int slices = 5;
  WaveletKind wavelet = WaveletKind::kCdf53;
  int lambda_index = 0;
  bool weconv = true;   // false selects the plain-convolution baseline
  bool wecharm = true;  // false codes each band in one piece
  float leaky_slope = kDefaultLeakySlope;

  bool operator==(const Hyperparams&) const = default;
};

using ModelDigest = std::array<uint8_t, 16>;

// Named weight tensors plus architecture hyperparameters. On disk:
// "WCVM" | version u8 | u32 index length | JSON index | f32 blob | CRC32,
// with the CRC covering every preceding byte.
class ModelManifest {
 public:
  struct Entry {
    std::vector<int> shape;
    size_t offset = 0;  // in floats from the start of the blob
    size_t count = 0;
  };

  Hyperparams hyper;
  std::optional<CdfTable> z_cdf;

  void Add(const std::string& name, std::vector<int> shape,
           std::span<const float> values);
  bool Has(const std::string& name) const { return index_.count(name) != 0; }
  // MissingTensor if absent, BadShape if the stored shape differs.
  std::span<const float> Get(const std::string& name,
                             const std::vector<int>& shape) const;
  const Entry& Find(const std::string& name) const;
  const std::map<std::string, Entry>& entries() const { return index_; }

  void RequireAll(const std::vector<std::string>& names) const;

  std::vector<uint8_t> Serialize() const;
  static ModelManifest Parse(std::span<const uint8_t> bytes);

  // First 16 bytes of the SHA-256 of the serialised form; set by Parse and
  // Serialize.
  const ModelDigest& digest() const { return digest_; }

 private:
  std::map<std::string, Entry> index_;
  std::vector<float> blob_;
  mutable ModelDigest digest_{};
};

ModelManifest LoadManifest(const std::string& path);
// Also checks that every name in `required` resolves.
ModelManifest LoadManifest(const std::string& path,
                           const std::vector<std::string>& required);
void SaveManifest(const ModelManifest& manifest, const std::string& path);

ModelDigest Sha256Prefix(std::span<const uint8_t> bytes);
uint32_t Crc32(std::span<const uint8_t> bytes);

std::vector<uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const uint8_t> bytes);

}  // namespace wcv

#endif  // WCV_MANIFEST_H_
