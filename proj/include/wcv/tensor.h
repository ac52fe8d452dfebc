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

#ifndef WCV_TENSOR_H_
#define WCV_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wcv {

struct Shape {
  int channels = 0;
  int height = 0;
  int width = 0;

  size_t plane_size() const { return size_t(height) * size_t(width); }
  size_t size() const { return size_t(channels) * plane_size(); }
  bool operator==(const Shape&) const = default;
};

std::string ToString(const Shape& shape);

// Rank-3 (channels x height x width) array of 32-bit reals, stored
// channel-major then row-major.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int channels, int height, int width, float fill = 0.0f);
  explicit Tensor(const Shape& shape, float fill = 0.0f)
      : Tensor(shape.channels, shape.height, shape.width, fill) {}

  const Shape& shape() const { return shape_; }
  int channels() const { return shape_.channels; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float& at(int c, int y, int x) {
    return data_[(size_t(c) * shape_.height + y) * shape_.width + x];
  }
  float at(int c, int y, int x) const {
    return data_[(size_t(c) * shape_.height + y) * shape_.width + x];
  }

  std::span<float> plane(int c) {
    return {data_.data() + size_t(c) * shape_.plane_size(), shape_.plane_size()};
  }
  std::span<const float> plane(int c) const {
    return {data_.data() + size_t(c) * shape_.plane_size(), shape_.plane_size()};
  }

  std::span<float> values() { return data_; }
  std::span<const float> values() const { return data_; }

  bool operator==(const Tensor&) const = default;

 private:
  Shape shape_;
  std::vector<float> data_;
};

// Integer counterpart used for quantized symbols.
struct SymbolTensor {
  Shape shape;
  std::vector<int32_t> values;
};

// Stacks tensors of identical spatial size along the channel axis.
Tensor ConcatChannels(std::span<const Tensor* const> parts);
Tensor ConcatChannels(std::initializer_list<const Tensor*> parts);

// Copies channels [first, first + count).
Tensor SliceChannels(const Tensor& t, int first, int count);

// Replicates the last row / column so the result is height x width.
Tensor PadReplicate(const Tensor& t, int height, int width);

Tensor Crop(const Tensor& t, int height, int width);

float MaxAbsDiff(const Tensor& a, const Tensor& b);

bool AllFinite(const Tensor& t);

}  // namespace wcv

#endif  // WCV_TENSOR_H_
