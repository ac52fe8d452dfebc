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

#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "test_util.h"
#include "wcv/sweep.h"

namespace wcv {
namespace {

const char kConfigs[] = R"([
  {"name": "j53", "wavelet": "53", "qsteps": [1, 2, 4, 8, 16, 32]},
  {"name": "haar", "mode": "classical", "wavelet": "haar", "levels": 2,
   "qsteps": [1, 2, 4, 8]}
])";

TEST_CASE("sweep config parsing") {
  const auto configs = ParseSweepConfigs(kConfigs);
  REQUIRE(configs.size() == 2);
  CHECK(configs[0].wavelet == WaveletKind::kCdf53);
  CHECK(configs[0].levels == kDefaultLevels);
  CHECK(configs[0].points() == 6);
  CHECK(configs[1].wavelet == WaveletKind::kHaar);
  CHECK(configs[1].levels == 2);
  CHECK(test::KindOf([] { ParseSweepConfigs(R"([{"name": "x", "mode": "lossy"}])"); }) ==
        ErrorKind::kPreconditionViolation);
  CHECK(test::KindOf([] { ParseSweepConfigs("[{"); }) == ErrorKind::kPreconditionViolation);
  CHECK(test::KindOf([] { ParseSweepConfigs(R"([{"wavelet": "53"}])"); }) ==
        ErrorKind::kPreconditionViolation);
}

TEST_CASE("classical sweep") {
  const SweepResult r = RunSweep(std::string(WCV_TEST_DATA_DIR), ParseSweepConfigs(kConfigs));
  CHECK(r.rows.size() == 3 * 6 + 3 * 4);
  CHECK(r.rows[0].image == "astronaut.png");
  CHECK(r.rows[1].image == "chelsea.png");
  CHECK(r.rows[0].config == "j53@q1");

  // Rows of one image are 3 apart within a configuration.
  for (size_t i = 3; i < 18; ++i) {
    CHECK(r.rows[i].bpp < r.rows[i - 3].bpp);
    CHECK(r.rows[i].psnr_db < r.rows[i - 3].psnr_db);
  }
  for (const SweepRow& row : r.rows) {
    CHECK(row.msssim > 0.0);
    CHECK(row.msssim <= 1.0);
    CHECK(row.audit_error() <= 0.005);
  }
  CHECK(r.worst_audit_error <= 0.005);

  const auto& curve = r.curves.at("j53");
  REQUIRE(curve.size() == 6);
  CHECK(curve[0].bpp == doctest::Approx((r.rows[0].bpp + r.rows[1].bpp + r.rows[2].bpp) / 3));
  CHECK(BdRate(curve, curve) == doctest::Approx(0.0));

  std::ostringstream csv;
  WriteSweepCsv(csv, r);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "config,image,bpp,psnr_db,msssim,est_bits,actual_bits");
  size_t count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  CHECK(count == r.rows.size());
}

TEST_CASE("sweep errors") {
  const auto empty = std::filesystem::temp_directory_path() / "wcv_sweep_empty";
  std::filesystem::create_directories(empty);
  CHECK(test::KindOf([&] { RunSweep(empty.string(), ParseSweepConfigs(kConfigs)); }) ==
        ErrorKind::kIoError);
  CHECK(test::KindOf([] { ListImages("/nonexistent/wcv"); }) == ErrorKind::kIoError);
  CHECK(test::KindOf([] {
          RunSweep(test::NaturalImages(), ParseSweepConfigs(R"([{"name": "n"}])"));
        }) == ErrorKind::kPreconditionViolation);
  std::filesystem::remove(empty);
}

}  // namespace
}  // namespace wcv
