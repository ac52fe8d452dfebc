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

#include "wcv/manifest.h"

#include <openssl/sha.h>
#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "wcv/byte_io.h"
#include "wcv/error.h"

namespace wcv {
namespace {

constexpr char kMagic[4] = {'W', 'C', 'V', 'M'};

using Json = nlohmann::json;

size_t ShapeCount(const std::vector<int>& shape, const std::string& name) {
  size_t count = 1;
  for (int d : shape) {
    if (d <= 0) Fail(ErrorKind::kBadShape, "tensor " + name + " has empty dimension");
    count *= size_t(d);
  }
  return count;
}

std::string ShapeText(const std::vector<int>& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Json CdfToJson(const CdfTable& table) {
  Json channels = Json::array();
  for (const auto& ch : table.channels) {
    channels.push_back({{"min", ch.min}, {"max", ch.max}, {"cum", ch.cum}});
  }
  return channels;
}

CdfTable CdfFromJson(const Json& j) {
  CdfTable table;
  for (const auto& c : j) {
    CdfTable::Channel ch;
    ch.min = c.at("min").get<int32_t>();
    ch.max = c.at("max").get<int32_t>();
    ch.cum = c.at("cum").get<std::vector<uint32_t>>();
    table.channels.push_back(std::move(ch));
  }
  table.Validate(ErrorKind::kCorruptBlob);
  return table;
}

}  // namespace

ModelDigest Sha256Prefix(std::span<const uint8_t> bytes) {
  uint8_t full[SHA256_DIGEST_LENGTH];
  SHA256(bytes.data(), bytes.size(), full);
  ModelDigest out;
  std::copy_n(full, out.size(), out.begin());
  return out;
}

uint32_t Crc32(std::span<const uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  size_t done = 0;
  while (done < bytes.size()) {
    const uInt chunk = uInt(std::min<size_t>(bytes.size() - done, 1u << 30));
    crc = crc32(crc, bytes.data() + done, chunk);
    done += chunk;
  }
  return uint32_t(crc);
}

std::vector<uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIoError, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) Fail(ErrorKind::kIoError, "read failed: " + path);
  return bytes;
}

void WriteFileBytes(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIoError, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) Fail(ErrorKind::kIoError, "write failed: " + path);
}

void ModelManifest::Add(const std::string& name, std::vector<int> shape,
                        std::span<const float> values) {
  const size_t count = ShapeCount(shape, name);
  if (count != values.size()) {
    Fail(ErrorKind::kBadShape, "tensor " + name + " declared " + ShapeText(shape) +
                                   " but has " + std::to_string(values.size()) +
                                   " values");
  }
  if (Has(name)) Fail(ErrorKind::kBadShape, "duplicate tensor " + name);
  index_[name] = Entry{std::move(shape), blob_.size(), count};
  blob_.insert(blob_.end(), values.begin(), values.end());
}

const ModelManifest::Entry& ModelManifest::Find(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) Fail(ErrorKind::kMissingTensor, name);
  return it->second;
}

std::span<const float> ModelManifest::Get(const std::string& name,
                                          const std::vector<int>& shape) const {
  const Entry& e = Find(name);
  if (e.shape != shape) {
    Fail(ErrorKind::kBadShape, "tensor " + name + " is " + ShapeText(e.shape) +
                                   ", expected " + ShapeText(shape));
  }
  return {blob_.data() + e.offset, e.count};
}

void ModelManifest::RequireAll(const std::vector<std::string>& names) const {
  for (const auto& name : names) Find(name);
}

std::vector<uint8_t> ModelManifest::Serialize() const {
  Json index;
  index["hyperparams"] = {{"N", hyper.n},
                          {"M", hyper.m},
                          {"slices", hyper.slices},
                          {"wavelet", int(hyper.wavelet)},
                          {"lambda_index", hyper.lambda_index},
                          {"weconv", hyper.weconv},
                          {"wecharm", hyper.wecharm},
                          {"leaky_slope", hyper.leaky_slope}};
  Json tensors = Json::array();
  for (const auto& [name, e] : index_) {
    tensors.push_back({{"name", name}, {"shape", e.shape}, {"offset", e.offset * 4}});
  }
  index["tensors"] = std::move(tensors);
  if (z_cdf) index["z_cdf"] = CdfToJson(*z_cdf);
  const std::string text = index.dump();

  ByteWriter out;
  out.Bytes(std::span(reinterpret_cast<const uint8_t*>(kMagic), 4));
  out.U8(kManifestVersion);
  out.U32(uint32_t(text.size()));
  out.Text(text);
  for (float v : blob_) out.F32(v);
  out.U32(Crc32(out.bytes()));
  digest_ = Sha256Prefix(out.bytes());
  return out.Take();
}

ModelManifest ModelManifest::Parse(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    Fail(ErrorKind::kBadMagic, "not a model manifest");
  }
  ByteReader in(bytes.subspan(4), ErrorKind::kCorruptBlob);
  const uint8_t version = in.U8();
  if (version != kManifestVersion) {
    Fail(ErrorKind::kVersionUnsupported,
         "manifest version " + std::to_string(version));
  }
  if (bytes.size() < 13) Fail(ErrorKind::kCorruptBlob, "manifest truncated");
  const auto body = bytes.first(bytes.size() - 4);
  ByteReader tail(bytes.last(4), ErrorKind::kCorruptBlob);
  if (tail.U32() != Crc32(body)) Fail(ErrorKind::kCorruptBlob, "checksum mismatch");

  const uint32_t text_len = in.U32();
  if (size_t(text_len) > in.remaining() - 4) {
    Fail(ErrorKind::kCorruptBlob, "index length exceeds file");
  }
  const auto text = in.Bytes(text_len);
  const size_t blob_bytes = in.remaining() - 4;
  if (blob_bytes % 4 != 0) Fail(ErrorKind::kCorruptBlob, "blob is not a float array");

  ModelManifest m;
  m.blob_.resize(blob_bytes / 4);
  for (float& v : m.blob_) v = in.F32();

  try {
    const Json index = Json::parse(text.begin(), text.end());
    const Json& h = index.at("hyperparams");
    m.hyper.n = h.at("N").get<int>();
    m.hyper.m = h.at("M").get<int>();
    m.hyper.slices = h.at("slices").get<int>();
    const int code = h.at("wavelet").get<int>();
    if (code < 0 || code > 2) Fail(ErrorKind::kBadShape, "unknown wavelet code");
    m.hyper.wavelet = WaveletKind(code);
    m.hyper.lambda_index = h.value("lambda_index", 0);
    m.hyper.weconv = h.value("weconv", true);
    m.hyper.wecharm = h.value("wecharm", true);
    m.hyper.leaky_slope = h.value("leaky_slope", kDefaultLeakySlope);
    if (m.hyper.n <= 0 || m.hyper.m <= 0 || m.hyper.slices <= 0 ||
        m.hyper.slices > 255 || !(m.hyper.leaky_slope > 0.0f) ||
        !(m.hyper.leaky_slope < 1.0f)) {
      Fail(ErrorKind::kBadShape, "invalid hyperparameters");
    }

    std::vector<std::pair<size_t, size_t>> spans;
    for (const auto& t : index.at("tensors")) {
      const auto name = t.at("name").get<std::string>();
      Entry e;
      e.shape = t.at("shape").get<std::vector<int>>();
      e.count = ShapeCount(e.shape, name);
      const auto offset = t.at("offset").get<size_t>();
      if (offset % 4 != 0 || offset / 4 > m.blob_.size() ||
          e.count > m.blob_.size() - offset / 4) {
        Fail(ErrorKind::kCorruptBlob, "tensor " + name + " lies outside the blob");
      }
      e.offset = offset / 4;
      if (!m.index_.emplace(name, e).second) {
        Fail(ErrorKind::kCorruptBlob, "duplicate tensor " + name);
      }
      spans.emplace_back(e.offset, e.offset + e.count);
    }
    std::sort(spans.begin(), spans.end());
    for (size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].first < spans[i - 1].second) {
        Fail(ErrorKind::kCorruptBlob, "tensors overlap in the blob");
      }
    }
    if (index.contains("z_cdf")) m.z_cdf = CdfFromJson(index.at("z_cdf"));
  } catch (const Json::exception& e) {
    Fail(ErrorKind::kCorruptBlob, std::string("malformed index: ") + e.what());
  }
  m.digest_ = Sha256Prefix(bytes);
  return m;
}

ModelManifest LoadManifest(const std::string& path) {
  return ModelManifest::Parse(ReadFileBytes(path));
}

ModelManifest LoadManifest(const std::string& path,
                           const std::vector<std::string>& required) {
  ModelManifest m = LoadManifest(path);
  m.RequireAll(required);
  return m;
}

void SaveManifest(const ModelManifest& manifest, const std::string& path) {
  WriteFileBytes(path, manifest.Serialize());
}

}  // namespace wcv
