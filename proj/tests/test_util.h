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

#ifndef WCV_TESTS_TEST_UTIL_H_
#define WCV_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wcv/error.h"
#include "wcv/tensor.h"

namespace wcv::test {

// SplitMix64; also reproduced by the Python oracles.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) {
    return lo + (hi - lo) * double(Next() >> 11) * 0x1.0p-53;
  }
  int Int(int lo, int hi) { return lo + int(Next() % uint64_t(hi - lo + 1)); }
  // Box-Muller.
  double Normal() {
    const double u = Uniform(1e-300, 1.0);
    const double v = Uniform(0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
  }

 private:
  uint64_t state_;
};

inline Tensor RandomTensor(SplitMix64& rng, int c, int h, int w, double lo = -1.0,
                           double hi = 1.0) {
  Tensor t(c, h, w);
  for (float& v : t.values()) v = float(rng.Uniform(lo, hi));
  return t;
}

// Kind of the wcv::Error thrown by `f`, or nothing if it returns normally.
template <typename F>
std::optional<ErrorKind> KindOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline std::string DataPath(const std::string& name) {
  return std::string(WCV_TEST_DATA_DIR) + "/" + name;
}

inline std::vector<std::string> NaturalImages() {
  return {DataPath("astronaut.png"), DataPath("chelsea.png"), DataPath("coffee.png")};
}

}  // namespace wcv::test

#endif  // WCV_TESTS_TEST_UTIL_H_
