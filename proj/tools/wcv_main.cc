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

// Command-line front end: encode, decode, metrics, sweep, bdrate, init-model.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wcv/bitstream.h"
#include "wcv/error.h"
#include "wcv/graph.h"
#include "wcv/image_io.h"
#include "wcv/manifest.h"
#include "wcv/metrics.h"
#include "wcv/sweep.h"
#include "wcv/threading.h"

namespace {

using namespace wcv;

WaveletKind WaveletArg(const std::string& name) {
  const auto w = ParseWavelet(name);
  if (!w) Fail(ErrorKind::kPreconditionViolation, "unknown wavelet " + name);
  return *w;
}

CodecMode ModeArg(const std::string& name) {
  if (name == "neural") return CodecMode::kNeural;
  if (name == "classical") return CodecMode::kClassical;
  Fail(ErrorKind::kPreconditionViolation, "unknown mode " + name);
}

// Architecture flags given on the command line must agree with the model.
struct ArchFlags {
  std::string wavelet;
  int slices = 0;
  bool no_weconv = false;
  bool no_wecharm = false;

  void Check(const Hyperparams& h) const {
    if (!wavelet.empty() && WaveletArg(wavelet) != h.wavelet) {
      Fail(ErrorKind::kModelMismatch, "model uses the " +
                                          std::string(WaveletName(h.wavelet)) +
                                          " wavelet");
    }
    if (slices != 0 && slices != h.slices) {
      Fail(ErrorKind::kModelMismatch,
           "model has " + std::to_string(h.slices) + " slices");
    }
    if (no_weconv && h.weconv) Fail(ErrorKind::kModelMismatch, "model uses WeConv");
    if (no_wecharm && h.wecharm) {
      Fail(ErrorKind::kModelMismatch, "model uses the wavelet-domain entropy model");
    }
  }
};

std::vector<RdPoint> ReadCurve(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIoError, "cannot open " + path);
  std::vector<RdPoint> curve;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    RdPoint p;
    if (fields >> p.bpp >> p.psnr_db) curve.push_back(p);
  }
  return curve;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet-domain image codec"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads for convolutions")
      ->check(CLI::Range(1, 256));

  std::string in_path;
  std::string out_path;
  std::string mode = "classical";
  std::string wavelet;
  std::string model_path;
  float qstep = 1.0f;
  int levels = kDefaultLevels;
  ArchFlags arch;

  auto* encode = app.add_subcommand("encode", "Compress an 8-bit RGB PNG/PPM image");
  encode->add_option("input", in_path)->required();
  encode->add_option("-o,--output", out_path)->required();
  encode->add_option("--mode", mode)->check(CLI::IsMember({"neural", "classical"}));
  encode->add_option("--wavelet", wavelet)->check(CLI::IsMember({"haar", "53", "97"}));
  encode->add_option("--qstep", qstep)->check(CLI::PositiveNumber);
  encode->add_option("--levels", levels)->check(CLI::Range(1, 16));
  encode->add_option("--model", model_path);
  encode->add_option("--slices", arch.slices)->check(CLI::IsMember({5, 10}));
  encode->add_flag("--no-weconv", arch.no_weconv);
  encode->add_flag("--no-wecharm", arch.no_wecharm);

  auto* decode = app.add_subcommand("decode", "Reconstruct an image from a bitstream");
  decode->add_option("input", in_path)->required();
  decode->add_option("-o,--output", out_path)->required();
  decode->add_option("--model", model_path);

  std::string other_path;
  auto* metrics = app.add_subcommand("metrics", "PSNR and MS-SSIM between two images");
  metrics->add_option("reference", in_path)->required();
  metrics->add_option("test", other_path)->required();

  std::string config_path;
  std::string csv_path;
  std::string reference;
  std::vector<float> qsteps{1, 2, 4, 8, 16, 32};
  auto* sweep = app.add_subcommand("sweep", "Rate-distortion sweep over a directory");
  sweep->add_option("images", in_path)->required();
  sweep->add_option("--config", config_path, "JSON list of configurations");
  sweep->add_option("--wavelet", wavelet)->check(CLI::IsMember({"haar", "53", "97"}));
  sweep->add_option("--levels", levels)->check(CLI::Range(1, 16));
  sweep->add_option("--qsteps", qsteps);
  sweep->add_option("--csv", csv_path);
  sweep->add_option("--reference", reference, "Configuration BD-rates are measured against");

  auto* bdrate = app.add_subcommand("bdrate", "BD-rate of curve B against curve A");
  bdrate->add_option("curve_a", in_path, "CSV of bpp,psnr rows")->required();
  bdrate->add_option("curve_b", other_path)->required();

  Hyperparams hyper;
  uint64_t seed = 1;
  auto* init = app.add_subcommand("init-model", "Write a randomly initialised manifest");
  init->add_option("-o,--output", out_path)->required();
  init->add_option("--n", hyper.n)->check(CLI::PositiveNumber);
  init->add_option("--m", hyper.m)->check(CLI::PositiveNumber);
  init->add_option("--slices", hyper.slices)->check(CLI::Range(1, 255));
  init->add_option("--wavelet", wavelet)->check(CLI::IsMember({"haar", "53", "97"}));
  init->add_option("--lambda-index", hyper.lambda_index);
  init->add_option("--seed", seed);
  init->add_flag("--no-weconv", arch.no_weconv);
  init->add_flag("--no-wecharm", arch.no_wecharm);

  CLI11_PARSE(app, argc, argv);

  try {
    SetThreadCount(threads);
    if (*encode) {
      EncodeOptions options;
      options.mode = ModeArg(mode);
      std::optional<Model> model;
      if (options.mode == CodecMode::kNeural) {
        if (model_path.empty()) {
          Fail(ErrorKind::kPreconditionViolation, "neural mode needs --model");
        }
        model = Model::FromManifest(LoadManifest(model_path));
        arch.wavelet = wavelet;
        arch.Check(model->hyper);
        options.model = &*model;
      } else {
        options.classical = {wavelet.empty() ? WaveletKind::kCdf53 : WaveletArg(wavelet),
                             levels, qstep};
      }
      const EncodedImage enc = EncodeFile(in_path, out_path, options);
      std::printf("%zu bytes, %.6f bpp\n", enc.bytes.size(), enc.bpp);
    } else if (*decode) {
      std::optional<Model> model;
      if (!model_path.empty()) model = Model::FromManifest(LoadManifest(model_path));
      DecodeFile(in_path, out_path, model ? &*model : nullptr);
    } else if (*metrics) {
      const Tensor a = ReadImage(in_path);
      const Tensor b = ReadImage(other_path);
      std::printf("psnr_db %.4f\n", Psnr(a, b));
      if (a.height() >= kMsSsimMinSize && a.width() >= kMsSsimMinSize) {
        std::printf("msssim %.6f\n", MsSsim(a, b));
      }
    } else if (*sweep) {
      std::vector<SweepConfig> configs;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) Fail(ErrorKind::kIoError, "cannot open " + config_path);
        std::stringstream text;
        text << in.rdbuf();
        configs = ParseSweepConfigs(text.str());
      } else {
        SweepConfig c;
        c.wavelet = wavelet.empty() ? WaveletKind::kCdf53 : WaveletArg(wavelet);
        c.name = "classical-" + std::string(WaveletName(c.wavelet));
        c.levels = levels;
        c.qsteps = qsteps;
        configs.push_back(c);
      }
      const SweepResult result = RunSweep(in_path, configs);
      if (csv_path.empty()) {
        WriteSweepCsv(std::cout, result);
      } else {
        std::ofstream csv(csv_path);
        WriteSweepCsv(csv, result);
        if (!csv) Fail(ErrorKind::kIoError, "cannot write " + csv_path);
      }
      std::fprintf(stderr, "rate audit: worst |actual - estimate| / estimate = %.4f%%\n",
                   100.0 * result.worst_audit_error);
      if (!reference.empty()) {
        const auto ref = result.curves.find(reference);
        if (ref == result.curves.end()) {
          Fail(ErrorKind::kPreconditionViolation, "no configuration named " + reference);
        }
        for (const auto& [name, curve] : result.curves) {
          if (name == reference) continue;
          std::fprintf(stderr, "bd-rate %s vs %s: %+.3f%%\n", name.c_str(),
                       reference.c_str(), BdRate(ref->second, curve));
        }
      }
    } else if (*bdrate) {
      std::printf("%.6f\n", BdRate(ReadCurve(in_path), ReadCurve(other_path)));
    } else if (*init) {
      if (!wavelet.empty()) hyper.wavelet = WaveletArg(wavelet);
      hyper.weconv = !arch.no_weconv;
      hyper.wecharm = !arch.no_wecharm;
      SaveManifest(RandomManifest(hyper, seed), out_path);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "wcv: %s\n", e.what());
    return 1;
  }
  return 0;
}
