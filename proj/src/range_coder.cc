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

#include "wcv/range_coder.h"

#include <string>

#include "wcv/error.h"

namespace wcv {
namespace {

constexpr uint32_t kTop = 1u << 24;

// Start of `value`'s slot when [0, size) is spread uniformly over 2^16.
uint32_t UniformCum(uint32_t value, uint32_t size) {
  return uint32_t((uint64_t(value) << kProbabilityBits) / size);
}

}  // namespace

void RangeEncoder::Encode(uint32_t cum, uint32_t freq) {
  if (freq == 0 || cum + freq > kProbabilityTotal) {
    Fail(ErrorKind::kEncodingError, "invalid interval [" + std::to_string(cum) +
                                        ", +" + std::to_string(freq) + ")");
  }
  const uint32_t r = range_ >> kProbabilityBits;
  low_ += uint64_t(r) * cum;
  range_ = r * freq;
  while (range_ < kTop) {
    range_ <<= 8;
    ShiftLow();
  }
}

void RangeEncoder::EncodeUniform(uint32_t value, uint32_t size) {
  if (size == 0 || value >= size) {
    Fail(ErrorKind::kEncodingError, "uniform value out of range");
  }
  if (size == 1) return;
  if (size > kProbabilityTotal) {
    const uint32_t hi_size = ((size - 1) >> kProbabilityBits) + 1;
    const uint32_t hi = value >> kProbabilityBits;
    EncodeUniform(hi, hi_size);
    const uint32_t lo_size = hi + 1 == hi_size
                                 ? ((size - 1) & (kProbabilityTotal - 1)) + 1
                                 : kProbabilityTotal;
    EncodeUniform(value & (kProbabilityTotal - 1), lo_size);
    return;
  }
  const uint32_t cum = UniformCum(value, size);
  Encode(cum, UniformCum(value + 1, size) - cum);
}

void RangeEncoder::ShiftLow() {
  if (uint32_t(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const uint8_t carry = uint8_t(low_ >> 32);
    uint8_t pending = cache_;
    do {
      out_.push_back(uint8_t(pending + carry));
      pending = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = uint8_t(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

std::vector<uint8_t> RangeEncoder::Finish() {
  for (int i = 0; i < 5; ++i) ShiftLow();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> bytes) : bytes_(bytes) {
  if (NextByte() != 0) {
    Fail(ErrorKind::kDecodingError, "range coder stream must start with 0x00");
  }
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | NextByte();
}

uint8_t RangeDecoder::NextByte() {
  if (pos_ >= bytes_.size()) {
    Fail(ErrorKind::kDecodingError,
         "range coder stream truncated at byte " + std::to_string(pos_));
  }
  return bytes_[pos_++];
}

uint32_t RangeDecoder::Target() {
  step_ = range_ >> kProbabilityBits;
  const uint32_t target = code_ / step_;
  if (target >= kProbabilityTotal) {
    Fail(ErrorKind::kDecodingError, "range coder state out of bounds");
  }
  return target;
}

void RangeDecoder::Consume(uint32_t cum, uint32_t freq) {
  code_ -= step_ * cum;
  range_ = step_ * freq;
  while (range_ < kTop) {
    code_ = (code_ << 8) | NextByte();
    range_ <<= 8;
  }
}

uint32_t RangeDecoder::DecodeUniform(uint32_t size) {
  if (size <= 1) return 0;
  if (size > kProbabilityTotal) {
    const uint32_t hi_size = ((size - 1) >> kProbabilityBits) + 1;
    const uint32_t hi = DecodeUniform(hi_size);
    const uint32_t lo_size = hi + 1 == hi_size
                                 ? ((size - 1) & (kProbabilityTotal - 1)) + 1
                                 : kProbabilityTotal;
    return (hi << kProbabilityBits) | DecodeUniform(lo_size);
  }
  const uint32_t target = Target();
  uint32_t v = uint32_t((uint64_t(target) * size) >> kProbabilityBits);
  while (v + 1 < size && UniformCum(v + 1, size) <= target) ++v;
  while (v > 0 && UniformCum(v, size) > target) --v;
  const uint32_t cum = UniformCum(v, size);
  Consume(cum, UniformCum(v + 1, size) - cum);
  return v;
}

void RangeDecoder::Finish() const {
  if (pos_ != bytes_.size()) {
    Fail(ErrorKind::kDecodingError,
         std::to_string(bytes_.size() - pos_) + " trailing bytes after stream");
  }
}

}  // namespace wcv
