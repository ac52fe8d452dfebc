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

#ifndef WCV_IMAGE_IO_H_
#define WCV_IMAGE_IO_H_

#include <string>

#include "wcv/tensor.h"

namespace wcv {

// 8-bit RGB PNG or binary PPM (P6), chosen by content. Returns 3 x H x W
// with sample values 0..255. Grey and alpha PNGs are converted to RGB.
Tensor ReadImage(const std::string& path);

// Writes PNG unless the path ends in ".ppm". Values are rounded and clamped.
void WriteImage(const std::string& path, const Tensor& image);

}  // namespace wcv

#endif  // WCV_IMAGE_IO_H_
