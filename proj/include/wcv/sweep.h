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

#ifndef WCV_SWEEP_H_
#define WCV_SWEEP_H_

#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "wcv/bitstream.h"
#include "wcv/metrics.h"

namespace wcv {

// One curve of a rate-distortion sweep. Classical configurations produce a
// point per qstep, neural ones a point per model file.
struct SweepConfig {
  std::string name;
  CodecMode mode = CodecMode::kClassical;
  WaveletKind wavelet = WaveletKind::kCdf53;
  int levels = kDefaultLevels;
  std::vector<float> qsteps;
  std::vector<std::string> models;

  size_t points() const {
    return mode == CodecMode::kClassical ? qsteps.size() : models.size();
  }
};

// Parses a JSON array of objects with keys name, mode ("classical" or
// "neural"), wavelet, levels, qsteps and models.
std::vector<SweepConfig> ParseSweepConfigs(const std::string& json_text);

struct SweepRow {
  std::string config;  // "<name>@<point label>"
  std::string image;
  double bpp = 0.0;
  double psnr_db = 0.0;
  double msssim = 0.0;
  double est_bits = 0.0;
  double actual_bits = 0.0;

  double audit_error() const { return std::abs(actual_bits - est_bits) / est_bits; }
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Per configuration, one image-averaged point per rate setting.
  std::map<std::string, std::vector<RdPoint>> curves;
  double worst_audit_error = 0.0;
};

// Images are the PNG / PPM files of `image_dir`, taken in filename order.
SweepResult RunSweep(const std::string& image_dir,
                     const std::vector<SweepConfig>& configs);
SweepResult RunSweep(const std::vector<std::string>& image_paths,
                     const std::vector<SweepConfig>& configs);

std::vector<std::string> ListImages(const std::string& dir);

void WriteSweepCsv(std::ostream& out, const SweepResult& result);

}  // namespace wcv

#endif  // WCV_SWEEP_H_
