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
#include <vector>

#include "doctest.h"
#include "test_util.h"
#include "wcv/error.h"
#include "wcv/wavelet.h"

namespace wcv {
namespace {

constexpr WaveletKind kAll[] = {WaveletKind::kHaar, WaveletKind::kCdf53,
                                WaveletKind::kCdf97};

void CheckClose(const std::vector<float>& got, const std::vector<double>& want,
                double tol) {
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(tol));
}

TEST_CASE("wire codes and names") {
  CHECK(uint8_t(WaveletKind::kHaar) == 0);
  CHECK(uint8_t(WaveletKind::kCdf53) == 1);
  CHECK(uint8_t(WaveletKind::kCdf97) == 2);
  CHECK(WaveletFromCode(2) == WaveletKind::kCdf97);
  CHECK_THROWS_AS(WaveletFromCode(3), Error);
  CHECK(ParseWavelet("53") == WaveletKind::kCdf53);
  CHECK(ParseWavelet("haar") == WaveletKind::kHaar);
  CHECK(ParseWavelet("97") == WaveletKind::kCdf97);
  CHECK_FALSE(ParseWavelet("db4").has_value());
  CHECK(ExtensionFor(WaveletKind::kHaar) == ExtensionMode::kHalfSampleSymmetric);
  CHECK(ExtensionFor(WaveletKind::kCdf97) == ExtensionMode::kWholeSampleSymmetric);
}

TEST_CASE("haar 1-D examples") {
  const std::vector<float> ones{1, 1};
  const Bands1d b = Dwt1d(ones, WaveletKind::kHaar);
  CheckClose(b.low, {1.41421356}, 1e-7);
  CHECK(b.high[0] == doctest::Approx(0.0));

  // Oracle: tests/oracles/coding_oracle.py (2x2 orthonormal matrix per pair).
  const std::vector<float> ramp{1, 2, 3, 4};
  const Bands1d r = Dwt1d(ramp, WaveletKind::kHaar);
  CheckClose(r.low, {2.121320343559643, 4.949747468305833}, 1e-6);
  CheckClose(r.high, {-0.7071067811865476, -0.7071067811865476}, 1e-6);

  const std::vector<float> low{1.41421356f};
  const std::vector<float> high{0.0f};
  CheckClose(Idwt1d(low, high, WaveletKind::kHaar), {1.0, 1.0}, 1e-6);
}

TEST_CASE("9/7 matches direct FIR filtering") {
  // Oracle: JPEG 2000 irreversible analysis taps applied by convolution with
  // whole-sample reflection (tests/oracles/coding_oracle.py).
  const std::vector<float> sig{3, -1, 4, 1, -5, 9, 2, -6, 5, 3, 5};
  const Bands1d b = Dwt1d(sig, WaveletKind::kCdf97);
  const std::vector<double> low{0.348116875, 2.593822203, -0.483404618,
                                2.179772735, 1.464220449, 4.143061588};
  const std::vector<double> high{-5.345261157, 1.702369421, 12.918762261,
                                 -11.519946971, -1.755923553};
  REQUIRE(b.low.size() == low.size());
  REQUIRE(b.high.size() == high.size());
  for (size_t i = 0; i < low.size(); ++i) CHECK(std::fabs(b.low[i] - low[i]) < 2e-5);
  for (size_t i = 0; i < high.size(); ++i) CHECK(std::fabs(b.high[i] - high[i]) < 2e-5);
}

TEST_CASE("constant signals are annihilated by 5/3") {
  const std::vector<float> c(8, 2.5f);
  const Bands1d b = Dwt1d(c, WaveletKind::kCdf53);
  for (float v : b.high) CHECK(v == doctest::Approx(0.0).epsilon(1e-7));
  for (float v : b.low) CHECK(v == doctest::Approx(2.5));
}

TEST_CASE("1-D round trips and zero input") {
  test::SplitMix64 rng(11);
  for (WaveletKind k : kAll) {
    for (int n = 2; n <= 19; ++n) {
      std::vector<float> x(static_cast<size_t>(n));
      for (float& v : x) v = float(rng.Uniform(-10, 10));
      const Bands1d b = Dwt1d(x, k);
      CHECK(b.low.size() == size_t((n + 1) / 2));
      CHECK(b.high.size() == size_t(n / 2));
      const std::vector<float> y = Idwt1d(b.low, b.high, k);
      for (int i = 0; i < n; ++i) CHECK(std::fabs(y[size_t(i)] - x[size_t(i)]) <= 1e-5 * 10);
    }
    const std::vector<float> zero{0.0f};
    CheckClose(Idwt1d(zero, zero, k), {0.0, 0.0}, 1e-9);
  }
  std::vector<float> seven(7);
  for (float& v : seven) v = float(rng.Uniform(-1, 1));
  const Bands1d b = Dwt1d(seven, WaveletKind::kCdf97);
  const auto back = Idwt1d(b.low, b.high, WaveletKind::kCdf97);
  for (size_t i = 0; i < 7; ++i) CHECK(std::fabs(back[i] - seven[i]) <= 1e-5);
}

TEST_CASE("1-D errors") {
  const std::vector<float> one{1.0f};
  try {
    Dwt1d(one, WaveletKind::kHaar);
    FAIL("expected DegenerateInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateInput);
  }
  const std::vector<float> low{1, 2, 3};
  const std::vector<float> high{1};
  try {
    Idwt1d(low, high, WaveletKind::kCdf53);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kShapeMismatch);
  }
}

TEST_CASE("symmetric extension") {
  const std::vector<float> abc{1, 2, 3};
  CHECK(SymmetricExtend(abc, 2, 0, ExtensionMode::kWholeSampleSymmetric) ==
        std::vector<float>{3, 2, 1, 2, 3});
  const std::vector<float> ab{1, 2};
  CHECK(SymmetricExtend(ab, 1, 1, ExtensionMode::kHalfSampleSymmetric) ==
        std::vector<float>{1, 1, 2, 2});
  // Oracle: reflect(i) = -i below zero, 2(n-1) - i past the end.
  const std::vector<float> four{1, 2, 3, 4};
  CHECK(SymmetricExtend(four, 3, 2, ExtensionMode::kWholeSampleSymmetric) ==
        std::vector<float>{4, 3, 2, 1, 2, 3, 4, 3, 2});
  CHECK_THROWS_AS(SymmetricExtend(four, 4, 0, ExtensionMode::kWholeSampleSymmetric), Error);
  CHECK_THROWS_AS(SymmetricExtend(four, 0, 5, ExtensionMode::kHalfSampleSymmetric), Error);
}

TEST_CASE("2-D examples") {
  Tensor ones(1, 2, 2, 1.0f);
  SubbandSet s = Dwt2d(ones, WaveletKind::kHaar);
  CHECK(s.ll.at(0, 0, 0) == doctest::Approx(2.0));
  CHECK(s.hl.at(0, 0, 0) == doctest::Approx(0.0));
  CHECK(s.lh.at(0, 0, 0) == doctest::Approx(0.0));
  CHECK(s.hh.at(0, 0, 0) == doctest::Approx(0.0));

  Tensor x(1, 2, 2);
  x.at(0, 0, 0) = 1;
  x.at(0, 0, 1) = 2;
  x.at(0, 1, 0) = 3;
  x.at(0, 1, 1) = 4;
  s = Dwt2d(x, WaveletKind::kHaar);
  CHECK(s.ll.at(0, 0, 0) == doctest::Approx(5.0));
  CHECK(s.lh.at(0, 0, 0) == doctest::Approx(-2.0));
  CHECK(s.hl.at(0, 0, 0) == doctest::Approx(-1.0));
  CHECK(std::fabs(s.hh.at(0, 0, 0)) < 1e-6);
  CHECK(MaxAbsDiff(Idwt2d(s), x) <= 1e-6f);

  SubbandSet zero{Tensor(2, 3, 4), Tensor(2, 3, 4), Tensor(2, 3, 4), Tensor(2, 3, 4),
                  WaveletKind::kCdf97, 5, 7};
  const Tensor z = Idwt2d(zero);
  CHECK(z.shape() == Shape{2, 5, 7});
  for (float v : z.values()) CHECK(v == 0.0f);
}

TEST_CASE("2-D round trips on odd shapes") {
  test::SplitMix64 rng(5);
  const Tensor a = test::RandomTensor(rng, 3, 17, 13);
  CHECK(MaxAbsDiff(Idwt2d(Dwt2d(a, WaveletKind::kCdf53)), a) <= 1e-5f);
  const Tensor b = test::RandomTensor(rng, 1, 5, 5);
  CHECK(MaxAbsDiff(Idwt2d(Dwt2d(b, WaveletKind::kCdf97)), b) <= 1e-5f);
  const SubbandSet s = Dwt2d(a, WaveletKind::kHaar);
  CHECK(s.ll.shape() == Shape{3, 9, 7});
  CHECK(s.hh.shape() == Shape{3, 9, 7});
}

TEST_CASE("2-D properties") {
  test::SplitMix64 rng(21);
  for (WaveletKind k : kAll) {
    // Constant annihilation.
    const Tensor c(2, 9, 6, 3.25f);
    const SubbandSet s = Dwt2d(c, k);
    for (const Tensor* t : {&s.hl, &s.lh, &s.hh}) {
      for (float v : t->values()) CHECK(std::fabs(v) <= 1e-6f);
    }
    // Linearity.
    const Tensor x = test::RandomTensor(rng, 2, 11, 8);
    const Tensor y = test::RandomTensor(rng, 2, 11, 8);
    Tensor mix(x.shape());
    for (size_t i = 0; i < mix.size(); ++i) {
      mix.values()[i] = 0.5f * x.values()[i] - 2.0f * y.values()[i];
    }
    const SubbandSet sx = Dwt2d(x, k);
    const SubbandSet sy = Dwt2d(y, k);
    const SubbandSet sm = Dwt2d(mix, k);
    for (size_t i = 0; i < sm.hh.size(); ++i) {
      CHECK(std::fabs(sm.hh.values()[i] -
                      (0.5f * sx.hh.values()[i] - 2.0f * sy.hh.values()[i])) <= 1e-5f);
      CHECK(std::fabs(sm.ll.values()[i] -
                      (0.5f * sx.ll.values()[i] - 2.0f * sy.ll.values()[i])) <= 1e-5f);
    }
    // Channel independence.
    const SubbandSet first = Dwt2d(SliceChannels(x, 1, 1), k);
    CHECK(first.lh == SliceChannels(sx.lh, 1, 1));
  }
}

TEST_CASE("haar conserves energy on odd shapes") {
  test::SplitMix64 rng(3);
  const Tensor x = test::RandomTensor(rng, 2, 7, 9);
  const SubbandSet s = Dwt2d(x, WaveletKind::kHaar);
  double ex = 0.0;
  double es = 0.0;
  for (float v : x.values()) ex += double(v) * v;
  for (const Tensor* t : {&s.ll, &s.hl, &s.lh, &s.hh}) {
    for (float v : t->values()) es += double(v) * v;
  }
  CHECK(std::fabs(ex - es) / ex <= 1e-4);
}

TEST_CASE("2-D errors") {
  CHECK_THROWS_AS(Dwt2d(Tensor(1, 1, 5), WaveletKind::kHaar), Error);
  SubbandSet bad{Tensor(1, 2, 2), Tensor(1, 2, 3), Tensor(1, 2, 2), Tensor(1, 2, 2),
                 WaveletKind::kHaar, 4, 4};
  try {
    Idwt2d(bad);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kShapeMismatch);
  }
}

}  // namespace
}  // namespace wcv
