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

#include "wcv/entropy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wcv/error.h"

namespace wcv {
namespace {

// Half-width of the per-value alphabet, in standard deviations.
constexpr double kTailSigmas = 12.0;
// Largest sigma (in bucket units) coded without grouping values.
constexpr double kMaxBucketSigma = 16.0;

int64_t FloorDiv(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

double Phi(double x) {
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  return NormalCdf(x);
}

}  // namespace

int32_t QuantizeValue(float x, float mean) {
  const float d = x - mean;
  if (!std::isfinite(d)) {
    Fail(ErrorKind::kNumericalError, "cannot quantize non-finite value");
  }
  const double r = std::round(double(d));
  if (std::fabs(r) > double(std::numeric_limits<int32_t>::max())) {
    Fail(ErrorKind::kNumericalError, "value too large to quantize");
  }
  return int32_t(r);
}

SymbolTensor Quantize(const Tensor& x, const Tensor& mean) {
  if (x.shape() != mean.shape()) {
    Fail(ErrorKind::kShapeMismatch, "quantize " + ToString(x.shape()) +
                                        " with mean " + ToString(mean.shape()));
  }
  SymbolTensor q{x.shape(), std::vector<int32_t>(x.size())};
  for (size_t i = 0; i < x.size(); ++i) {
    q.values[i] = QuantizeValue(x.values()[i], mean.values()[i]);
  }
  return q;
}

Tensor Dequantize(const SymbolTensor& q, const Tensor& mean) {
  if (q.shape != mean.shape()) {
    Fail(ErrorKind::kShapeMismatch, "dequantize shape mismatch");
  }
  Tensor out(q.shape);
  for (size_t i = 0; i < q.values.size(); ++i) {
    out.values()[i] = float(q.values[i]) + mean.values()[i];
  }
  return out;
}

void ClampSymbols(SymbolTensor& q, SymbolRange range) {
  for (int32_t& v : q.values) v = std::clamp(v, range.min, range.max);
}

double Erfc(double x) {
  const double z = std::fabs(x);
  const double t = 1.0 / (1.0 + 0.5 * z);
  const double ans =
      t * std::exp(-z * z - 1.26551223 +
                   t * (1.00002368 +
                        t * (0.37409196 +
                             t * (0.09678418 +
                                  t * (-0.18628806 +
                                       t * (0.27886807 +
                                            t * (-1.13520398 +
                                                 t * (1.48851587 +
                                                      t * (-0.82215223 +
                                                           t * 0.17087277)))))))));
  return x >= 0.0 ? ans : 2.0 - ans;
}

double NormalCdf(double x) { return 0.5 * Erfc(-x * 0.70710678118654752440); }

double GaussianSymbolProb(int32_t q, double mu, double sigma, SymbolRange range) {
  const double s = std::max(sigma, double(kSigmaMin));
  q = std::clamp(q, range.min, range.max);
  const double inf = std::numeric_limits<double>::infinity();
  const double lower = q == range.min ? -inf : (q - 0.5 - mu) / s;
  const double upper = q == range.max ? inf : (q + 0.5 - mu) / s;
  // Subtract in the tail that keeps precision.
  const double p = lower > 0.0 ? Phi(-lower) - Phi(-upper) : Phi(upper) - Phi(lower);
  return std::max(p, kProbabilityFloor);
}

void SymbolPlane::Validate() const {
  if (symbols.shape != mu.shape() || symbols.shape != sigma.shape() ||
      symbols.values.size() != symbols.shape.size()) {
    Fail(ErrorKind::kShapeMismatch, "symbol plane tensors disagree in shape");
  }
  if (range.min > range.max) {
    Fail(ErrorKind::kPreconditionViolation, "empty symbol range");
  }
  for (int32_t v : symbols.values) {
    if (v < range.min || v > range.max) {
      Fail(ErrorKind::kPreconditionViolation,
           "symbol " + std::to_string(v) + " outside range");
    }
  }
}

double EstimateRate(const SymbolPlane& plane) {
  plane.Validate();
  double bits = 0.0;
  for (size_t i = 0; i < plane.symbols.values.size(); ++i) {
    bits -= std::log2(GaussianSymbolProb(plane.symbols.values[i],
                                         plane.mu.values()[i],
                                         plane.sigma.values()[i], plane.range));
  }
  return bits;
}

GaussianModel::GaussianModel(double mu, double sigma, SymbolRange range)
    : range_(range) {
  if (!std::isfinite(mu) || !std::isfinite(sigma)) {
    Fail(ErrorKind::kNumericalError, "non-finite Gaussian parameters");
  }
  if (range.min > range.max) {
    Fail(ErrorKind::kPreconditionViolation, "empty symbol range");
  }
  mu_ = mu;
  sigma_ = std::max(sigma, double(kSigmaMin));
  center_ = int32_t(std::clamp(std::round(mu), double(range.min), double(range.max)));
  bucket_ = 1;
  while (sigma_ / bucket_ > kMaxBucketSigma && bucket_ < (1 << 30)) bucket_ *= 2;

  const int64_t all_first = FloorDiv(int64_t(range.min) - center_, bucket_);
  const int64_t all_last = FloorDiv(int64_t(range.max) - center_, bucket_);
  const int64_t reach = int64_t(std::ceil(kTailSigmas * sigma_ / bucket_)) + 1;
  first_bucket_ = std::max(all_first, -reach - 1);
  last_bucket_ = std::min(all_last, reach);
  escape_low_ = first_bucket_ > all_first;
  escape_high_ = last_bucket_ < all_last;
  positions_ = int(last_bucket_ - first_bucket_ + 1) + escape_low_ + escape_high_;
}

void GaussianModel::Precompute() {
  std::vector<uint32_t> table(size_t(positions_) + 1);
  for (int j = 0; j <= positions_; ++j) table[size_t(j)] = Cum(j);
  cum_cache_ = std::move(table);
}

uint32_t GaussianModel::Cum(int position) const {
  if (position <= 0) return 0;
  if (position >= positions_) return kProbabilityTotal;
  if (!cum_cache_.empty()) return cum_cache_[size_t(position)];
  // Lower edge of the slot: the first value of its bucket, less one half.
  const int64_t b = first_bucket_ + position - (escape_low_ ? 1 : 0);
  const double edge = double(int64_t(center_) + b * bucket_) - 0.5;
  const double mass = NormalCdf((edge - mu_) / sigma_);
  const double scaled = std::floor(mass * double(kProbabilityTotal - positions_));
  return uint32_t(position) + uint32_t(scaled);
}

GaussianModel::Slot GaussianModel::SlotAt(int position) const {
  if (escape_low_ && position == 0) {
    const int64_t end = int64_t(center_) + first_bucket_ * bucket_;
    return {0, range_.min, uint32_t(end - range_.min)};
  }
  if (escape_high_ && position == positions_ - 1) {
    const int64_t begin = int64_t(center_) + (last_bucket_ + 1) * bucket_;
    return {position, int32_t(begin), uint32_t(range_.max - begin + 1)};
  }
  const int64_t b = first_bucket_ + position - (escape_low_ ? 1 : 0);
  const int64_t lo = std::max<int64_t>(range_.min, int64_t(center_) + b * bucket_);
  const int64_t hi =
      std::min<int64_t>(range_.max, int64_t(center_) + b * bucket_ + bucket_ - 1);
  return {position, int32_t(lo), uint32_t(hi - lo + 1)};
}

GaussianModel::Slot GaussianModel::SlotOf(int32_t value) const {
  const int64_t b = FloorDiv(int64_t(value) - center_, bucket_);
  if (b < first_bucket_) return SlotAt(0);
  if (b > last_bucket_) return SlotAt(positions_ - 1);
  return SlotAt(int(b - first_bucket_) + (escape_low_ ? 1 : 0));
}

void GaussianModel::Encode(RangeEncoder& enc, int32_t value) const {
  if (value < range_.min || value > range_.max) {
    Fail(ErrorKind::kEncodingError,
         "symbol " + std::to_string(value) + " outside model support");
  }
  const Slot slot = SlotOf(value);
  const uint32_t lo = Cum(slot.position);
  enc.Encode(lo, Cum(slot.position + 1) - lo);
  enc.EncodeUniform(uint32_t(int64_t(value) - slot.base), slot.spread);
}

int32_t GaussianModel::Decode(RangeDecoder& dec) const {
  const uint32_t target = dec.Target();
  int lo = 0;
  int hi = positions_;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (Cum(mid) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const uint32_t cum = Cum(lo);
  dec.Consume(cum, Cum(lo + 1) - cum);
  const Slot slot = SlotAt(lo);
  return int32_t(int64_t(slot.base) + dec.DecodeUniform(slot.spread));
}

double GaussianModel::CodeLength(int32_t value) const {
  const Slot slot = SlotOf(std::clamp(value, range_.min, range_.max));
  const double freq = double(Cum(slot.position + 1) - Cum(slot.position));
  return -std::log2(freq / kProbabilityTotal) + std::log2(double(slot.spread));
}

void CdfTable::Validate(ErrorKind kind) const {
  for (size_t c = 0; c < channels.size(); ++c) {
    const Channel& ch = channels[c];
    const std::string where = "CDF channel " + std::to_string(c);
    if (ch.max < ch.min) Fail(kind, where + ": empty support");
    const size_t n = size_t(int64_t(ch.max) - ch.min + 1);
    if (ch.cum.size() != n + 1) Fail(kind, where + ": wrong entry count");
    if (ch.cum.front() != 0 || ch.cum.back() != kProbabilityTotal) {
      Fail(kind, where + ": must span [0, 2^16]");
    }
    for (size_t i = 1; i < ch.cum.size(); ++i) {
      if (ch.cum[i] <= ch.cum[i - 1]) Fail(kind, where + ": not strictly increasing");
    }
  }
}

CdfTable BuildFactorizedCdf(const SymbolTensor& samples) {
  const size_t plane = samples.shape.plane_size();
  if (plane == 0 || samples.shape.channels <= 0) {
    Fail(ErrorKind::kDegenerateInput, "factorized CDF needs samples in every channel");
  }
  CdfTable table;
  table.channels.resize(size_t(samples.shape.channels));
  for (int c = 0; c < samples.shape.channels; ++c) {
    const auto first = samples.values.begin() + std::ptrdiff_t(size_t(c) * plane);
    const auto [lo_it, hi_it] = std::minmax_element(first, first + std::ptrdiff_t(plane));
    CdfTable::Channel& ch = table.channels[size_t(c)];
    ch.min = std::max<int32_t>(*lo_it - 1, std::numeric_limits<int16_t>::min());
    ch.max = std::min<int32_t>(*hi_it + 1, std::numeric_limits<int16_t>::max());
    const uint32_t n = uint32_t(ch.max - ch.min + 1);
    if (n > kProbabilityTotal / 2) {
      Fail(ErrorKind::kDegenerateInput, "factorized CDF support too wide");
    }
    // Laplace smoothing: one pseudo-count per bin.
    std::vector<uint64_t> counts(n, 1);
    for (auto it = first; it != first + std::ptrdiff_t(plane); ++it) {
      counts[size_t(std::clamp(*it, ch.min, ch.max) - ch.min)] += 1;
    }
    const uint64_t total = plane + n;
    ch.cum.resize(n + 1);
    uint64_t prefix = 0;
    for (uint32_t j = 0; j <= n; ++j) {
      ch.cum[j] = j + uint32_t(prefix * (kProbabilityTotal - n) / total);
      if (j < n) prefix += counts[j];
    }
  }
  table.Validate();
  return table;
}

void WriteCdfTable(const CdfTable& table, ByteWriter& out) {
  table.Validate();
  if (table.channels.size() > 0xFFFF) {
    Fail(ErrorKind::kEncodingError, "too many CDF channels");
  }
  out.U16(uint16_t(table.channels.size()));
  for (const auto& ch : table.channels) {
    if (ch.min < std::numeric_limits<int16_t>::min() ||
        ch.max > std::numeric_limits<int16_t>::max()) {
      Fail(ErrorKind::kEncodingError, "CDF support exceeds 16 bits");
    }
    out.I16(int16_t(ch.min));
    out.I16(int16_t(ch.max));
    for (size_t i = 1; i + 1 < ch.cum.size(); ++i) out.U16(uint16_t(ch.cum[i]));
  }
}

CdfTable ReadCdfTable(ByteReader& in) {
  CdfTable table;
  table.channels.resize(in.U16());
  for (auto& ch : table.channels) {
    ch.min = in.I16();
    ch.max = in.I16();
    if (ch.max < ch.min) Fail(ErrorKind::kDecodingError, "CDF support inverted");
    const size_t n = size_t(ch.max - ch.min + 1);
    ch.cum.resize(n + 1);
    ch.cum.front() = 0;
    for (size_t i = 1; i < n; ++i) ch.cum[i] = in.U16();
    ch.cum.back() = kProbabilityTotal;
  }
  table.Validate(ErrorKind::kDecodingError);
  return table;
}

void CdfModel::Encode(RangeEncoder& enc, int32_t value) const {
  if (value < channel_->min || value > channel_->max) {
    Fail(ErrorKind::kEncodingError,
         "symbol " + std::to_string(value) + " outside CDF support");
  }
  const size_t i = size_t(value - channel_->min);
  enc.Encode(channel_->cum[i], channel_->cum[i + 1] - channel_->cum[i]);
}

int32_t CdfModel::Decode(RangeDecoder& dec) const {
  const uint32_t target = dec.Target();
  const auto& cum = channel_->cum;
  // Last entry not greater than target.
  const size_t i = size_t(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin()) - 1;
  dec.Consume(cum[i], cum[i + 1] - cum[i]);
  return channel_->min + int32_t(i);
}

double CdfModel::CodeLength(int32_t value) const {
  const size_t i = size_t(std::clamp(value, channel_->min, channel_->max) - channel_->min);
  return -std::log2(double(channel_->cum[i + 1] - channel_->cum[i]) / kProbabilityTotal);
}

std::vector<uint8_t> EncodePlane(const SymbolPlane& plane) {
  plane.Validate();
  const auto& mu = plane.mu.values();
  const auto& sigma = plane.sigma.values();
  return RangeEncode(plane.symbols.values, [&](size_t i) {
    return GaussianModel(mu[i], sigma[i], plane.range);
  });
}

SymbolTensor DecodePlane(std::span<const uint8_t> bytes, const Tensor& mu,
                         const Tensor& sigma, SymbolRange range) {
  if (mu.shape() != sigma.shape()) {
    Fail(ErrorKind::kShapeMismatch, "mu/sigma shapes differ");
  }
  SymbolTensor out{mu.shape(), {}};
  out.values = RangeDecode(
      bytes,
      [&](size_t i) {
        return GaussianModel(mu.values()[i], sigma.values()[i], range);
      },
      mu.size());
  return out;
}

void ClampToSupport(SymbolTensor& symbols, const CdfTable& table) {
  if (size_t(symbols.shape.channels) != table.channels.size()) {
    Fail(ErrorKind::kShapeMismatch, "CDF table channel count mismatch");
  }
  const size_t plane = symbols.shape.plane_size();
  for (size_t c = 0; c < table.channels.size(); ++c) {
    const auto& ch = table.channels[c];
    for (size_t i = 0; i < plane; ++i) {
      int32_t& v = symbols.values[c * plane + i];
      v = std::clamp(v, ch.min, ch.max);
    }
  }
}

std::vector<uint8_t> EncodeFactorized(const SymbolTensor& symbols,
                                      const CdfTable& table, double* bits) {
  if (size_t(symbols.shape.channels) != table.channels.size()) {
    Fail(ErrorKind::kShapeMismatch, "CDF table channel count mismatch");
  }
  const size_t plane = symbols.shape.plane_size();
  double total = 0.0;
  auto bytes = RangeEncode(symbols.values, [&](size_t i) {
    const CdfModel model(table.channels[i / plane]);
    total += model.CodeLength(symbols.values[i]);
    return model;
  });
  if (bits != nullptr) *bits = total;
  return bytes;
}

SymbolTensor DecodeFactorized(std::span<const uint8_t> bytes,
                              const CdfTable& table, const Shape& shape) {
  if (size_t(shape.channels) != table.channels.size()) {
    Fail(ErrorKind::kShapeMismatch, "CDF table channel count mismatch");
  }
  const size_t plane = shape.plane_size();
  SymbolTensor out{shape, {}};
  out.values = RangeDecode(
      bytes, [&](size_t i) { return CdfModel(table.channels[i / plane]); },
      shape.size());
  return out;
}

}  // namespace wcv
