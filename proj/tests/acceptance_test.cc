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

// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "test_util.h"
#include "wcv/bitstream.h"
#include "wcv/classical.h"
#include "wcv/entropy.h"
#include "wcv/graph.h"
#include "wcv/image_io.h"
#include "wcv/metrics.h"
#include "wcv/range_coder.h"
#include "wcv/threading.h"
#include "wcv/wavelet.h"
#include "wcv/wecharm.h"

namespace wcv {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

const WaveletKind kWavelets[] = {WaveletKind::kHaar, WaveletKind::kCdf53,
                                 WaveletKind::kCdf97};

// The 500-tensor corpus shared by the first two criteria.
std::vector<Tensor> WaveletCorpus() {
  test::SplitMix64 rng(1001);
  std::vector<Tensor> corpus;
  for (int i = 0; i < 500; ++i) {
    corpus.push_back(test::RandomTensor(rng, rng.Int(1, 4), rng.Int(2, 64), rng.Int(2, 64)));
  }
  return corpus;
}

double Energy(const Tensor& t) {
  double e = 0.0;
  for (float v : t.values()) e += double(v) * v;
  return e;
}

Outcome PerfectReconstruction() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const Tensor& x : WaveletCorpus()) {
    for (WaveletKind w : kWavelets) {
      worst = std::max(worst, double(MaxAbsDiff(Idwt2d(Dwt2d(x, w)), x)));
    }
  }
  const double secs = Seconds(start);
  return {worst <= 1e-5 && secs < 10.0,
          Format("max error %.2e over 500 tensors x 3 wavelets in %.2f s", worst, secs)};
}

Outcome HaarEnergy() {
  double worst = 0.0;
  for (const Tensor& x : WaveletCorpus()) {
    const SubbandSet s = Dwt2d(x, WaveletKind::kHaar);
    const double out = Energy(s.ll) + Energy(s.hl) + Energy(s.lh) + Energy(s.hh);
    worst = std::max(worst, std::abs(out - Energy(x)) / Energy(x));
  }
  return {worst <= 1e-4, Format("max relative energy change %.2e", worst)};
}

Outcome RangeCoderLossless() {
  const auto start = Clock::now();
  test::SplitMix64 rng(1003);
  const size_t n = 100000;
  std::vector<double> mu(n);
  std::vector<double> sigma(n);
  std::vector<int32_t> symbols(n);
  for (size_t i = 0; i < n; ++i) {
    mu[i] = rng.Uniform(-30, 30);
    sigma[i] = std::exp(rng.Uniform(std::log(0.11), std::log(80.0)));
    symbols[i] = int32_t(std::clamp<long>(std::lround(mu[i] + sigma[i] * rng.Normal()),
                                          -255, 255));
  }
  auto model = [&](size_t i) { return GaussianModel(mu[i], sigma[i]); };
  const std::vector<uint8_t> bytes = RangeEncode(symbols, model);
  const bool exact = RangeDecode(bytes, model, n) == symbols;

  // Every truncation of a short stream, and a spread of cuts through the long one.
  const size_t short_n = 3000;
  const std::vector<uint8_t> short_bytes =
      RangeEncode(std::span<const int32_t>(symbols.data(), short_n), model);
  std::vector<std::pair<const std::vector<uint8_t>*, size_t>> cuts;
  for (size_t len = 0; len < short_bytes.size(); ++len) cuts.push_back({&short_bytes, len});
  for (int i = 0; i < 24; ++i) cuts.push_back({&bytes, size_t(rng.Int(0, int(bytes.size()) - 1))});
  size_t typed = 0;
  for (const auto& [stream, len] : cuts) {
    const size_t count = stream == &bytes ? n : short_n;
    const auto kind = test::KindOf([&] {
      RangeDecode(std::span<const uint8_t>(stream->data(), len), model, count);
    });
    typed += kind == ErrorKind::kDecodingError;
  }
  const double secs = Seconds(start);
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "1e5 symbols %s, %zu/%zu truncations raised DecodingError, %.2f s",
                exact ? "round-tripped exactly" : "MISMATCHED", typed, cuts.size(), secs);
  return {exact && typed == cuts.size() && secs < 5.0, detail};
}

Outcome RateTightness() {
  test::SplitMix64 rng(1004);
  double lo = 1e300;
  double hi = -1e300;
  bool pass = true;
  for (int trial = 0; trial < 100; ++trial) {
    SymbolPlane p;
    const int c = rng.Int(1, 8);
    const int h = rng.Int(1, 32);
    const int w = rng.Int(1, 32);
    p.mu = Tensor(c, h, w);
    p.sigma = Tensor(c, h, w);
    p.symbols.shape = p.mu.shape();
    for (size_t i = 0; i < p.mu.size(); ++i) {
      const double mu = rng.Uniform(-40, 40);
      const double sigma = std::exp(rng.Uniform(std::log(0.11), std::log(100.0)));
      p.mu.values()[i] = float(mu);
      p.sigma.values()[i] = float(sigma);
      p.symbols.values.push_back(
          int32_t(std::clamp<long>(std::lround(mu + sigma * rng.Normal()), -255, 255)));
    }
    const double estimate = EstimateRate(p);
    const double gap = 8.0 * double(EncodePlane(p).size()) - estimate;
    lo = std::min(lo, gap);
    hi = std::max(hi, gap - 0.002 * estimate);
    pass = pass && gap >= 0.0 && gap <= 256.0 + 0.002 * estimate;
  }
  return {pass, Format("min gap %.2f bits, max gap beyond 0.2%% slack %.2f bits", lo, hi)};
}

Outcome WeConvCancellation() {
  test::SplitMix64 rng(1005);
  double worst = 0.0;
  for (WaveletKind w : kWavelets) {
    for (bool inverse : {false, true}) {
      WeConvParams p;
      p.stem = ConvParams::Zeros(6, 4, 3, 2, inverse);
      for (float& v : p.stem.kernel) v = float(rng.Uniform(-0.5, 0.5));
      for (float& v : p.stem.bias) v = float(rng.Uniform(-0.5, 0.5));
      p.lf_convs = {ConvParams::Identity(6)};
      p.hf_convs = {ConvParams::Identity(18)};
      p.gdn = GdnParams::Identity(6, inverse);
      p.shortcut = ConvParams::Zeros(6, 4, 1, 2, inverse);
      p.wavelet = w;
      const Tensor x = test::RandomTensor(rng, 4, 33, 30);
      const Tensor out = inverse ? IWeConvForward(x, p) : WeConvForward(x, p);
      worst = std::max(worst, double(MaxAbsDiff(out, Conv2d(x, p.stem))));
    }
  }
  return {worst <= 1e-5, Format("max |weconv - stem| %.2e over 3 wavelets, both directions", worst)};
}

Outcome WeCharmSymmetry() {
  bool pass = true;
  std::string detail;
  for (int k : {5, 10}) {
    const Model model = Model::FromManifest(RandomManifest(Hyperparams{16, 40, k}, 1006));
    test::SplitMix64 rng(1006 + uint64_t(k));
    const Tensor image = test::RandomTensor(rng, 3, 128, 128);
    const LatentPair y = Analysis(image, model);
    Tensor z = HyperAnalysis(y, model);
    for (float& v : z.values()) v = std::round(v);
    const SideInfo side = HyperSynthesis(z, model);

    const BandEncoding lf = EncodeLf(y.y_l, side, model);
    const Tensor lf_dec = DecodeLf(lf.bytes, side, model);
    const BandEncoding hf = EncodeHf(y.y_h, &lf.decoded, side, model);
    const Tensor hf_dec = DecodeHf(hf.bytes, &lf_dec, side, model);
    const bool exact = lf_dec == lf.decoded && hf_dec == hf.decoded;
    const bool rejected =
        test::KindOf([&] { DecodeHf(hf.bytes, nullptr, side, model); }) ==
        ErrorKind::kPreconditionViolation;
    pass = pass && exact && rejected;
    detail += std::string(detail.empty() ? "" : "; ") + std::to_string(k) + " slices: " +
              (exact ? "bit-exact" : "MISMATCH") +
              (rejected ? ", HF without LF rejected" : ", HF without LF ACCEPTED");
  }
  return {pass, detail};
}

struct ImageCurve {
  std::vector<double> bpp;
  std::vector<double> psnr;
  bool deterministic = true;
};

Outcome ClassicalEndToEnd() {
  const auto start = Clock::now();
  const float qsteps[] = {1, 2, 4, 8, 16, 32};
  bool pass = true;
  double finest = 1e300;
  for (const std::string& path : test::NaturalImages()) {
    const Tensor img = ReadImage(path);
    ImageCurve c;
    for (float q : qsteps) {
      EncodeOptions o;
      o.classical = {WaveletKind::kCdf53, kDefaultLevels, q};
      const EncodedImage e = EncodeImage(img, o);
      const Tensor x = DecodeImage(e.bytes);
      c.deterministic = c.deterministic && DecodeImage(e.bytes) == x &&
                        EncodeImage(img, o).bytes == e.bytes;
      c.bpp.push_back(e.bpp);
      c.psnr.push_back(Psnr(img, x));
    }
    for (size_t i = 1; i < c.bpp.size(); ++i) {
      pass = pass && c.bpp[i] < c.bpp[i - 1] && c.psnr[i] < c.psnr[i - 1];
    }
    finest = std::min(finest, c.psnr[0]);
    pass = pass && c.deterministic;
  }
  const double secs = Seconds(start);
  pass = pass && finest >= 45.0 && secs < 30.0;
  return {pass, Format("3 images x 6 steps, lowest PSNR at qstep 1 = %.2f dB, %.2f s",
                       finest, secs)};
}

Outcome Sparsity() {
  bool pass = true;
  std::string detail;
  for (const std::string& path : test::NaturalImages()) {
    const Tensor img = ReadImage(path);
    const double coeff_zeros =
        ZeroFraction(QuantizedCoefficients(img, {WaveletKind::kCdf53, 3, 1.0f}));
    double mean = 0.0;
    for (float v : img.values()) mean += v;
    mean /= double(img.size());
    std::vector<int32_t> pixels;
    for (float v : img.values()) pixels.push_back(int32_t(std::lround(v - mean)));
    const double pixel_zeros = ZeroFraction(pixels);
    pass = pass && coeff_zeros > pixel_zeros;
    detail += (detail.empty() ? "" : ", ") +
              Format("%.3f vs %.3f", coeff_zeros, pixel_zeros);
  }
  return {pass, "zero fraction coefficients vs pixels: " + detail};
}

Outcome BdRateTool() {
  const std::vector<RdPoint> a = {{0.25, 30, 0}, {0.5, 33, 0}, {1, 36, 0}, {2, 39.5, 0}};
  const std::vector<RdPoint> b = {{0.22, 30.2, 0}, {0.46, 33.1, 0}, {0.95, 36.3, 0},
                                  {1.8, 39.4, 0}};
  std::vector<RdPoint> doubled = a;
  for (RdPoint& p : doubled) p.bpp *= 2.0;
  const double same = BdRate(a, a);
  const double twice = BdRate(a, doubled);
  const double synthetic = BdRate(a, b);
  const double oracle = -10.9989043988;
  const bool pass = std::abs(same) <= 1e-9 && std::abs(twice - 100.0) <= 1e-6 &&
                    std::abs(synthetic - oracle) <= 1e-4 * std::abs(oracle);
  return {pass, Format("identical %.2e%%, doubled %.9f%%, synthetic %.6f%%", same, twice,
                       synthetic)};
}

Outcome Determinism() {
  const Model model = Model::FromManifest(RandomManifest(Hyperparams{16, 40, 5}, 1010));
  const Tensor img = Crop(ReadImage(test::NaturalImages()[1]), 200, 260);
  EncodeOptions o;
  o.mode = CodecMode::kNeural;
  o.model = &model;
  SetThreadCount(1);
  const EncodedImage a = EncodeImage(img, o);
  const EncodedImage b = EncodeImage(img, o);
  const Tensor x1 = DecodeImage(a.bytes, &model);
  SetThreadCount(4);
  const EncodedImage c = EncodeImage(img, o);
  const Tensor x4 = DecodeImage(a.bytes, &model);
  SetThreadCount(1);
  const bool streams = a.bytes == b.bytes && a.bytes == c.bytes;
  const bool recon = x1 == x4;
  return {streams && recon,
          std::string("neural bitstreams ") + (streams ? "identical" : "DIFFER") +
              ", reconstructions at 1 vs 4 threads " + (recon ? "identical" : "DIFFER")};
}

}  // namespace
}  // namespace wcv

int main() {
  using wcv::Outcome;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"perfect reconstruction", wcv::PerfectReconstruction},
      {"Haar energy conservation", wcv::HaarEnergy},
      {"range coder losslessness", wcv::RangeCoderLossless},
      {"rate estimate tightness", wcv::RateTightness},
      {"WeConv cancellation", wcv::WeConvCancellation},
      {"WeChARM symmetry", wcv::WeCharmSymmetry},
      {"classical codec end to end", wcv::ClassicalEndToEnd},
      {"wavelet sparsity", wcv::Sparsity},
      {"BD-rate tool", wcv::BdRateTool},
      {"determinism", wcv::Determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
