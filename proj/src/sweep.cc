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

#include "wcv/sweep.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "wcv/error.h"
#include "wcv/graph.h"
#include "wcv/image_io.h"

namespace wcv {
namespace {

std::string PointLabel(const SweepConfig& c, size_t i) {
  if (c.mode == CodecMode::kNeural) {
    return std::filesystem::path(c.models[i]).stem().string();
  }
  std::ostringstream s;
  s << "q" << c.qsteps[i];
  return s.str();
}

bool IsImage(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return char(std::tolower(ch)); });
  return ext == ".png" || ext == ".ppm";
}

}  // namespace

std::vector<SweepConfig> ParseSweepConfigs(const std::string& json_text) {
  std::vector<SweepConfig> configs;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    for (const auto& j : doc) {
      SweepConfig c;
      c.name = j.at("name").get<std::string>();
      const std::string mode = j.value("mode", "classical");
      if (mode == "neural") {
        c.mode = CodecMode::kNeural;
      } else if (mode != "classical") {
        Fail(ErrorKind::kPreconditionViolation, "unknown sweep mode " + mode);
      }
      if (j.contains("wavelet")) {
        const auto w = ParseWavelet(j.at("wavelet").get<std::string>());
        if (!w) Fail(ErrorKind::kPreconditionViolation, "unknown wavelet in " + c.name);
        c.wavelet = *w;
      }
      c.levels = j.value("levels", kDefaultLevels);
      c.qsteps = j.value("qsteps", std::vector<float>{});
      c.models = j.value("models", std::vector<std::string>{});
      configs.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kPreconditionViolation, std::string("sweep config: ") + e.what());
  }
  return configs;
}

std::vector<std::string> ListImages(const std::string& dir) {
  std::error_code ec;
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && IsImage(entry.path())) {
      paths.push_back(entry.path().string());
    }
  }
  if (ec) Fail(ErrorKind::kIoError, "cannot list " + dir + ": " + ec.message());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) Fail(ErrorKind::kIoError, "no PNG or PPM images in " + dir);
  return paths;
}

SweepResult RunSweep(const std::string& image_dir,
                     const std::vector<SweepConfig>& configs) {
  return RunSweep(ListImages(image_dir), configs);
}

SweepResult RunSweep(const std::vector<std::string>& image_paths,
                     const std::vector<SweepConfig>& configs) {
  if (image_paths.empty()) Fail(ErrorKind::kIoError, "sweep has no images");
  std::vector<Tensor> images;
  for (const auto& p : image_paths) images.push_back(ReadImage(p));

  SweepResult result;
  for (const SweepConfig& config : configs) {
    if (config.points() == 0) {
      Fail(ErrorKind::kPreconditionViolation, config.name + " has no rate points");
    }
    std::vector<RdPoint>& curve = result.curves[config.name];
    for (size_t i = 0; i < config.points(); ++i) {
      EncodeOptions options;
      options.mode = config.mode;
      options.classical = {config.wavelet, config.levels,
                           config.mode == CodecMode::kClassical ? config.qsteps[i] : 1.0f};
      std::optional<Model> model;
      if (config.mode == CodecMode::kNeural) {
        model = Model::FromManifest(LoadManifest(config.models[i]));
        options.model = &*model;
      }
      RdPoint mean;
      for (size_t k = 0; k < images.size(); ++k) {
        const EncodedImage enc = EncodeImage(images[k], options);
        const Tensor decoded = DecodeImage(enc.bytes, options.model);
        SweepRow row;
        row.config = config.name + "@" + PointLabel(config, i);
        row.image = std::filesystem::path(image_paths[k]).filename().string();
        row.bpp = enc.bpp;
        row.psnr_db = Psnr(images[k], decoded);
        const bool large = images[k].height() >= kMsSsimMinSize &&
                           images[k].width() >= kMsSsimMinSize;
        row.msssim = large ? MsSsim(images[k], decoded) : std::nan("");
        row.est_bits = enc.estimated_bits;
        row.actual_bits = 8.0 * double(enc.bytes.size());
        result.worst_audit_error = std::max(result.worst_audit_error, row.audit_error());
        mean.bpp += row.bpp / double(images.size());
        mean.psnr_db += row.psnr_db / double(images.size());
        mean.msssim += row.msssim / double(images.size());
        result.rows.push_back(std::move(row));
      }
      curve.push_back(mean);
    }
  }
  return result;
}

void WriteSweepCsv(std::ostream& out, const SweepResult& result) {
  out << "config,image,bpp,psnr_db,msssim,est_bits,actual_bits\n";
  out << std::setprecision(10);
  for (const SweepRow& r : result.rows) {
    out << r.config << ',' << r.image << ',' << r.bpp << ',' << r.psnr_db << ','
        << r.msssim << ',' << r.est_bits << ',' << r.actual_bits << '\n';
  }
}

}  // namespace wcv
