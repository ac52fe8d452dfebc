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

#ifndef WCV_RANGE_CODER_H_
#define WCV_RANGE_CODER_H_

#include <cstdint>
#include <span>
#include <vector>

namespace wcv {

inline constexpr int kProbabilityBits = 16;
inline constexpr uint32_t kProbabilityTotal = 1u << kProbabilityBits;

// Byte-oriented range coder: 64-bit low (carry in bit 32), 32-bit range,
// renormalised whenever range drops below 2^24. Every interval is expressed
// over a total of 2^16.
//
// The first emitted byte is always zero and the stream ends with the four
// low bytes, so a decoder consumes exactly the bytes the encoder wrote.
class RangeEncoder {
 public:
  void Encode(uint32_t cum, uint32_t freq);
  // value in [0, size), size in [1, 2^32).
  void EncodeUniform(uint32_t value, uint32_t size);
  std::vector<uint8_t> Finish();

 private:
  void ShiftLow();

  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint8_t cache_ = 0;
  uint64_t cache_size_ = 1;
  std::vector<uint8_t> out_;
};

// Truncated or inconsistent input raises DecodingError; it never reads past
// the span it was given.
class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const uint8_t> bytes);

  // Returns the scaled target in [0, 2^16) for the next symbol; the caller
  // locates the interval containing it and calls Consume.
  uint32_t Target();
  void Consume(uint32_t cum, uint32_t freq);
  uint32_t DecodeUniform(uint32_t size);
  // Fails unless every byte of the stream was consumed.
  void Finish() const;

 private:
  uint8_t NextByte();

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
  uint32_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint32_t step_ = 0;
};

// Codes a symbol sequence where symbol i is modelled by model_at(i), which
// returns any type providing
//   void Encode(RangeEncoder&, int32_t) const;
//   int32_t Decode(RangeDecoder&) const;
// Decoding calls model_at in the same order, so models may depend on
// previously decoded symbols.
template <class ModelAt>
std::vector<uint8_t> RangeEncode(std::span<const int32_t> symbols,
                                 ModelAt&& model_at) {
  RangeEncoder enc;
  for (size_t i = 0; i < symbols.size(); ++i) model_at(i).Encode(enc, symbols[i]);
  return enc.Finish();
}

template <class ModelAt>
std::vector<int32_t> RangeDecode(std::span<const uint8_t> bytes,
                                 ModelAt&& model_at, size_t count) {
  RangeDecoder dec(bytes);
  std::vector<int32_t> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(model_at(i).Decode(dec));
  dec.Finish();
  return out;
}

}  // namespace wcv

#endif  // WCV_RANGE_CODER_H_
