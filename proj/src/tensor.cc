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

#include "wcv/tensor.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "wcv/error.h"

namespace wcv {

std::string ToString(const Shape& shape) {
  return std::to_string(shape.channels) + "x" + std::to_string(shape.height) +
         "x" + std::to_string(shape.width);
}

Tensor::Tensor(int channels, int height, int width, float fill)
    : shape_{channels, height, width} {
  if (channels < 0 || height < 0 || width < 0) {
    Fail(ErrorKind::kBadShape, "negative tensor dimension");
  }
  data_.assign(shape_.size(), fill);
}

Tensor ConcatChannels(std::span<const Tensor* const> parts) {
  if (parts.empty()) return Tensor();
  const int h = parts[0]->height();
  const int w = parts[0]->width();
  int channels = 0;
  for (const Tensor* p : parts) {
    if (p->height() != h || p->width() != w) {
      Fail(ErrorKind::kShapeMismatch, "concat of " + ToString(p->shape()) +
                                          " onto " + std::to_string(h) + "x" +
                                          std::to_string(w));
    }
    channels += p->channels();
  }
  Tensor out(channels, h, w);
  float* dst = out.values().data();
  for (const Tensor* p : parts) {
    std::memcpy(dst, p->values().data(), p->size() * sizeof(float));
    dst += p->size();
  }
  return out;
}

Tensor ConcatChannels(std::initializer_list<const Tensor*> parts) {
  return ConcatChannels(std::span<const Tensor* const>(parts.begin(), parts.size()));
}

Tensor SliceChannels(const Tensor& t, int first, int count) {
  if (first < 0 || count < 0 || first + count > t.channels()) {
    Fail(ErrorKind::kShapeMismatch, "channel slice out of range");
  }
  Tensor out(count, t.height(), t.width());
  const size_t plane = t.shape().plane_size();
  std::memcpy(out.values().data(), t.values().data() + size_t(first) * plane,
              size_t(count) * plane * sizeof(float));
  return out;
}

Tensor PadReplicate(const Tensor& t, int height, int width) {
  if (height < t.height() || width < t.width() || t.height() == 0 ||
      t.width() == 0) {
    Fail(ErrorKind::kShapeMismatch, "replicate pad cannot shrink");
  }
  Tensor out(t.channels(), height, width);
  for (int c = 0; c < t.channels(); ++c) {
    for (int y = 0; y < height; ++y) {
      const int sy = std::min(y, t.height() - 1);
      for (int x = 0; x < width; ++x) {
        out.at(c, y, x) = t.at(c, sy, std::min(x, t.width() - 1));
      }
    }
  }
  return out;
}

Tensor Crop(const Tensor& t, int height, int width) {
  if (height > t.height() || width > t.width()) {
    Fail(ErrorKind::kShapeMismatch, "crop larger than source");
  }
  Tensor out(t.channels(), height, width);
  for (int c = 0; c < t.channels(); ++c) {
    for (int y = 0; y < height; ++y) {
      std::memcpy(&out.at(c, y, 0), t.plane(c).data() + size_t(y) * t.width(), size_t(width) * sizeof(float));
    }
  }
  return out;
}

float MaxAbsDiff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    Fail(ErrorKind::kShapeMismatch,
         ToString(a.shape()) + " vs " + ToString(b.shape()));
  }
  float m = 0.0f;
  for (size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a.values()[i] - b.values()[i]));
  }
  return m;
}

bool AllFinite(const Tensor& t) {
  return std::all_of(t.values().begin(), t.values().end(),
                     [](float v) { return std::isfinite(v); });
}

}  // namespace wcv
