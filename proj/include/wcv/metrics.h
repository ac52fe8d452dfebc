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

#ifndef WCV_METRICS_H_
#define WCV_METRICS_H_

#include <span>

#include "wcv/tensor.h"

namespace wcv {

inline constexpr double kPsnrCap = 100.0;
inline constexpr int kMsSsimMinSize = 160;

struct RdPoint {
  double bpp = 0.0;
  double psnr_db = 0.0;
  double msssim = 0.0;
};

// Both images hold 8-bit sample values.
double Psnr(const Tensor& a, const Tensor& b);

// Five scales, 11x11 Gaussian window with sigma 1.5. Each channel gets its own
// score and the scores are averaged. At scales smaller than the window the
// window shrinks to fit, with sigma scaled in proportion; odd sizes are
// edge-padded before 2x2 average pooling.
double MsSsim(const Tensor& a, const Tensor& b);

// Average rate difference of `b` against `a` in percent at equal PSNR, from
// cubic fits of log10(bpp) over the shared PSNR interval.
double BdRate(std::span<const RdPoint> a, std::span<const RdPoint> b);

}  // namespace wcv

#endif  // WCV_METRICS_H_
