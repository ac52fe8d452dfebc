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

#include <cmath>

#include "doctest.h"
#include "test_util.h"
#include "wcv/classical.h"
#include "wcv/image_io.h"
#include "wcv/metrics.h"

namespace wcv {
namespace {

Tensor Decode(const ClassicalStreams& s, WaveletKind wavelet, const Shape& shape) {
  return ClassicalDecode(s.block, s.lf, s.hf, wavelet, shape);
}

size_t CodedBytes(const ClassicalStreams& s) {
  return s.block.size() + s.lf.size() + s.hf.size();
}

Tensor Rounded(Tensor t) {
  for (float& v : t.values()) v = std::clamp(std::round(v), 0.0f, 255.0f);
  return t;
}

TEST_CASE("multi-level pyramid reconstructs") {
  test::SplitMix64 rng(51);
  for (WaveletKind w : {WaveletKind::kHaar, WaveletKind::kCdf53, WaveletKind::kCdf97}) {
    for (int levels = 1; levels <= 4; ++levels) {
      const Tensor x = test::RandomTensor(rng, 2, rng.Int(16, 40), rng.Int(16, 40), -50, 50);
      const Pyramid p = Decompose(x, w, levels);
      CHECK(p.levels.size() == size_t(levels));
      CHECK(MaxAbsDiff(Reconstruct(p), x) <= 1e-4f);
    }
  }
  CHECK(test::KindOf([] { Decompose(Tensor(1, 7, 16), WaveletKind::kHaar, 3); }) ==
        ErrorKind::kDegenerateInput);
}

TEST_CASE("constant image") {
  for (float value : {128.0f, 37.0f, 255.0f}) {
    const Tensor img(3, 40, 33, value);
    const ClassicalStreams s = ClassicalEncode(img, {WaveletKind::kCdf53, 3, 1.0f});
    CHECK(Rounded(Decode(s, WaveletKind::kCdf53, img.shape())) == img);
  }
  const ClassicalStreams gray = ClassicalEncode(Tensor(3, 64, 64, 128.0f), {});
  CHECK(gray.estimated_bits < 1.0);
  CHECK(gray.hf.size() <= 8);
}

TEST_CASE("decoding equals the inverse transform of the quantised coefficients") {
  test::SplitMix64 rng(52);
  for (WaveletKind w : {WaveletKind::kHaar, WaveletKind::kCdf53, WaveletKind::kCdf97}) {
    for (float qstep : {1.0f, 4.5f, 16.0f}) {
      const Tensor img = test::RandomTensor(rng, 3, 37, 29, 0, 255);
      const ClassicalOptions opt{w, 3, qstep};
      Tensor shifted = img;
      for (float& v : shifted.values()) v -= 128.0f;
      Pyramid p = Decompose(shifted, w, 3);
      for (SubbandSet& s : p.levels) {
        for (Tensor* band : {&s.ll, &s.hl, &s.lh, &s.hh}) {
          for (float& v : band->values()) v = float(std::round(double(v) / qstep)) * qstep;
        }
      }
      Tensor expected = Reconstruct(p);
      for (float& v : expected.values()) v += 128.0f;
      CHECK(Decode(ClassicalEncode(img, opt), w, img.shape()) == expected);
    }
  }
}

TEST_CASE("coarser steps cost fewer bits and more distortion") {
  const Tensor img = ReadImage(test::DataPath("chelsea.png"));
  const ClassicalStreams fine = ClassicalEncode(img, {WaveletKind::kCdf53, 3, 1.0f});
  const ClassicalStreams coarse = ClassicalEncode(img, {WaveletKind::kCdf53, 3, 8.0f});
  CHECK(CodedBytes(coarse) < CodedBytes(fine));
  const double psnr_fine = Psnr(img, Rounded(Decode(fine, WaveletKind::kCdf53, img.shape())));
  const double psnr_coarse =
      Psnr(img, Rounded(Decode(coarse, WaveletKind::kCdf53, img.shape())));
  CHECK(psnr_coarse < psnr_fine);
  CHECK(psnr_fine >= 45.0);
  const double actual = 8.0 * double(fine.lf.size() + fine.hf.size());
  CHECK(std::abs(actual - fine.estimated_bits) <= 512.0 + 0.01 * fine.estimated_bits);
}

TEST_CASE("wavelet coefficients are sparser than pixels") {
  const Tensor img = ReadImage(test::DataPath("coffee.png"));
  const std::vector<int32_t> coeffs = QuantizedCoefficients(img, {WaveletKind::kCdf53, 3, 1.0f});
  CHECK(coeffs.size() == img.size());
  double mean = 0.0;
  for (float v : img.values()) mean += v;
  mean /= double(img.size());
  std::vector<int32_t> pixels;
  for (float v : img.values()) pixels.push_back(int32_t(std::lround(v - mean)));
  CHECK(ZeroFraction(coeffs) > ZeroFraction(pixels));
  CHECK(ZeroFraction(std::vector<int32_t>{0, 1, 0, 0}) == 0.75);
  CHECK(ZeroFraction(std::vector<int32_t>{}) == 0.0);
}

TEST_CASE("classical errors") {
  const Tensor img(3, 32, 32, 10.0f);
  CHECK(test::KindOf([&] { ClassicalEncode(img, {WaveletKind::kCdf53, 3, 0.0f}); }) ==
        ErrorKind::kPreconditionViolation);
  CHECK(test::KindOf([&] { ClassicalEncode(img, {WaveletKind::kCdf53, 0, 1.0f}); }) ==
        ErrorKind::kPreconditionViolation);
  CHECK(test::KindOf([&] { ClassicalEncode(img, {WaveletKind::kCdf53, 3, 1e-6f}); }) ==
        ErrorKind::kPreconditionViolation);
  const ClassicalStreams s = ClassicalEncode(img, {});
  std::vector<uint8_t> block = s.block;
  block.pop_back();
  CHECK(test::KindOf([&] {
          ClassicalDecode(block, s.lf, s.hf, WaveletKind::kCdf53, img.shape());
        }) == ErrorKind::kDecodingError);
  CHECK(test::KindOf([&] {
          ClassicalDecode(s.block, s.lf, s.hf, WaveletKind::kCdf53, Shape{3, 32, 40});
        }) == ErrorKind::kDecodingError);
}

}  // namespace
}  // namespace wcv
