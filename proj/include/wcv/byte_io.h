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

#ifndef WCV_BYTE_IO_H_
#define WCV_BYTE_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "wcv/error.h"

namespace wcv {

// Little-endian serialisation helpers shared by the manifest and bitstream
// formats.
class ByteWriter {
 public:
  void U8(uint8_t v) { bytes_.push_back(v); }
  void U16(uint16_t v) {
    U8(uint8_t(v));
    U8(uint8_t(v >> 8));
  }
  void I16(int16_t v) { U16(uint16_t(v)); }
  void U32(uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(uint8_t(v >> (8 * i)));
  }
  void F32(float v) { U32(std::bit_cast<uint32_t>(v)); }
  void Bytes(std::span<const uint8_t> b) {
    bytes_.insert(bytes_.end(), b.begin(), b.end());
  }
  void Text(const std::string& s) {
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  // u32 length followed by the payload.
  void Segment(std::span<const uint8_t> b) {
    U32(uint32_t(b.size()));
    Bytes(b);
  }

  size_t size() const { return bytes_.size(); }
  std::vector<uint8_t>& bytes() { return bytes_; }
  std::vector<uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
};

// Bounds-checked reader; running off the end raises `error_kind`.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes,
                      ErrorKind error_kind = ErrorKind::kDecodingError)
      : bytes_(bytes), error_kind_(error_kind) {}

  uint8_t U8() {
    Need(1);
    return bytes_[pos_++];
  }
  uint16_t U16() {
    Need(2);
    uint16_t v = uint16_t(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  int16_t I16() { return int16_t(U16()); }
  uint32_t U32() {
    Need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  float F32() { return std::bit_cast<float>(U32()); }
  std::span<const uint8_t> Bytes(size_t n) {
    Need(n);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::span<const uint8_t> Segment() { return Bytes(U32()); }

  size_t position() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void Need(size_t n) const {
    if (bytes_.size() - pos_ < n) {
      Fail(error_kind_, "read of " + std::to_string(n) + " bytes at offset " +
                            std::to_string(pos_) + " overruns " +
                            std::to_string(bytes_.size()) + "-byte buffer");
    }
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
  ErrorKind error_kind_;
};

}  // namespace wcv

#endif  // WCV_BYTE_IO_H_
