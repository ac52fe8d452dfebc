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

#ifndef WCV_ENTROPY_H_
#define WCV_ENTROPY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "wcv/byte_io.h"
#include "wcv/error.h"
#include "wcv/range_coder.h"
#include "wcv/tensor.h"

namespace wcv {

inline constexpr float kSigmaMin = 0.11f;
inline constexpr double kProbabilityFloor = 1.0 / kProbabilityTotal;

// Inclusive symbol support. The default covers the latent alphabet; the
// classical codec widens it.
struct SymbolRange {
  int32_t min = -255;
  int32_t max = 255;
  bool operator==(const SymbolRange&) const = default;
};

// round_half_away_from_zero(x - mean); non-finite input -> NumericalError.
int32_t QuantizeValue(float x, float mean);
SymbolTensor Quantize(const Tensor& x, const Tensor& mean);
Tensor Dequantize(const SymbolTensor& q, const Tensor& mean);
void ClampSymbols(SymbolTensor& q, SymbolRange range);

// Complementary error function, rational Chebyshev approximation with
// fractional error below 1.2e-7. Encoder and decoder both use this exact
// routine so the quantised CDFs agree bit for bit.
double Erfc(double x);
// Standard normal CDF built on Erfc; absolute error below 1e-7.
double NormalCdf(double x);

// Mass of integer q under N(mu, sigma) over [q - 0.5, q + 0.5], with the
// tails beyond the range folded into its end symbols, floored at 2^-16.
// sigma is clamped to kSigmaMin.
double GaussianSymbolProb(int32_t q, double mu, double sigma,
                          SymbolRange range = {});

// Integer symbols with a per-element Gaussian model.
struct SymbolPlane {
  SymbolTensor symbols;
  Tensor mu;
  Tensor sigma;
  SymbolRange range;

  void Validate() const;
};

// Sum of -log2 GaussianSymbolProb over every element, in bits.
double EstimateRate(const SymbolPlane& plane);

// Per-element coding model for a discretised Gaussian.
//
// Values within roughly 12 sigma of the mean get their own interval; values
// further out share an escape interval and are then sent uniformly. When
// sigma exceeds 16 the alphabet is grouped into power-of-two buckets whose
// members are sent uniformly, which keeps every table well inside 16-bit
// precision.
class GaussianModel {
 public:
  GaussianModel(double mu, double sigma, SymbolRange range = {});

  void Encode(RangeEncoder& enc, int32_t value) const;
  int32_t Decode(RangeDecoder& dec) const;

  // Exact code length the model assigns to `value`, in bits.
  double CodeLength(int32_t value) const;

  // Tabulates the cumulative frequencies; worthwhile when one model codes
  // many symbols.
  void Precompute();

 private:
  struct Slot {
    int position;
    int32_t base;      // first value sent through this slot
    uint32_t spread;   // number of values sharing the slot
  };

  uint32_t Cum(int position) const;
  Slot SlotOf(int32_t value) const;
  Slot SlotAt(int position) const;

  double mu_;
  double sigma_;
  SymbolRange range_;
  int32_t center_;
  int32_t bucket_;
  int64_t first_bucket_;  // core bucket indices
  int64_t last_bucket_;
  bool escape_low_;
  bool escape_high_;
  int positions_;
  std::vector<uint32_t> cum_cache_;
};

// Quantised per-channel CDF for the factorized hyper-latent prior.
struct CdfTable {
  struct Channel {
    int32_t min = 0;
    int32_t max = 0;
    std::vector<uint32_t> cum;  // max - min + 2 entries, 0 ... 2^16
  };
  std::vector<Channel> channels;

  // Strictly increasing, starts at 0, ends at 2^16. Raises `kind` otherwise.
  void Validate(ErrorKind kind = ErrorKind::kBadShape) const;
};

// Laplace-smoothed histogram over [min - 1, max + 1] of each channel's
// samples, quantised to 16 bits with every bin at least one count wide.
CdfTable BuildFactorizedCdf(const SymbolTensor& samples);

// u16 channel count; per channel i16 min, i16 max, then the interior
// cumulative frequencies as u16.
void WriteCdfTable(const CdfTable& table, ByteWriter& out);
CdfTable ReadCdfTable(ByteReader& in);

class CdfModel {
 public:
  explicit CdfModel(const CdfTable::Channel& channel) : channel_(&channel) {}

  void Encode(RangeEncoder& enc, int32_t value) const;
  int32_t Decode(RangeDecoder& dec) const;
  double CodeLength(int32_t value) const;

 private:
  const CdfTable::Channel* channel_;
};

// Codes a plane with one GaussianModel per element, channel-major.
std::vector<uint8_t> EncodePlane(const SymbolPlane& plane);
SymbolTensor DecodePlane(std::span<const uint8_t> bytes, const Tensor& mu,
                         const Tensor& sigma, SymbolRange range = {});

// Pulls every symbol into its channel's support.
void ClampToSupport(SymbolTensor& symbols, const CdfTable& table);

// Codes channel-major with one CdfModel per channel; `bits` receives the
// code length the table assigns. Symbols outside the support -> EncodingError.
std::vector<uint8_t> EncodeFactorized(const SymbolTensor& symbols,
                                      const CdfTable& table,
                                      double* bits = nullptr);
SymbolTensor DecodeFactorized(std::span<const uint8_t> bytes,
                              const CdfTable& table, const Shape& shape);

}  // namespace wcv

#endif  // WCV_ENTROPY_H_
