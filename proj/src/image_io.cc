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

#include "wcv/image_io.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wcv/error.h"
#include "wcv/manifest.h"

namespace wcv {
namespace {

Tensor FromInterleaved(const uint8_t* rgb, int height, int width) {
  Tensor out(3, height, width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        out.at(c, y, x) = rgb[(size_t(y) * width + x) * 3 + c];
      }
    }
  }
  return out;
}

std::vector<uint8_t> ToInterleaved(const Tensor& image) {
  if (image.channels() != 3) {
    Fail(ErrorKind::kShapeMismatch, "can only write RGB images");
  }
  std::vector<uint8_t> rgb(image.size());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        const float v = std::clamp(std::round(image.at(c, y, x)), 0.0f, 255.0f);
        rgb[(size_t(y) * image.width() + x) * 3 + c] = uint8_t(v);
      }
    }
  }
  return rgb;
}

Tensor DecodePng(const std::vector<uint8_t>& bytes, const std::string& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    Fail(ErrorKind::kIoError, path + ": " + img.message);
  }
  img.format = PNG_FORMAT_RGB;
  std::vector<uint8_t> rgb(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, rgb.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    Fail(ErrorKind::kIoError, path + ": " + msg);
  }
  return FromInterleaved(rgb.data(), int(img.height), int(img.width));
}

// Binary PPM with maxval 255.
Tensor DecodePpm(const std::vector<uint8_t>& bytes, const std::string& path) {
  size_t pos = 2;
  auto token = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    long v = 0;
    int digits = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos]) && digits < 9) {
      v = v * 10 + (bytes[pos++] - '0');
      ++digits;
    }
    if (digits == 0) Fail(ErrorKind::kIoError, path + ": malformed PPM header");
    return v;
  };
  const long width = token();
  const long height = token();
  const long maxval = token();
  if (maxval != 255 || width <= 0 || height <= 0) {
    Fail(ErrorKind::kIoError, path + ": only 8-bit PPM is supported");
  }
  ++pos;  // single whitespace before the raster
  const size_t need = size_t(width) * size_t(height) * 3;
  if (pos > bytes.size() || bytes.size() - pos < need) {
    Fail(ErrorKind::kIoError, path + ": truncated PPM raster");
  }
  return FromInterleaved(bytes.data() + pos, int(height), int(width));
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(), [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) == b;
  });
}

}  // namespace

Tensor ReadImage(const std::string& path) {
  const std::vector<uint8_t> bytes = ReadFileBytes(path);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
    return DecodePng(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return DecodePpm(bytes, path);
  }
  Fail(ErrorKind::kIoError, path + ": not a PNG or binary PPM image");
}

void WriteImage(const std::string& path, const Tensor& image) {
  const std::vector<uint8_t> rgb = ToInterleaved(image);
  if (EndsWith(path, ".ppm")) {
    const std::string header = "P6\n" + std::to_string(image.width()) + " " +
                               std::to_string(image.height()) + "\n255\n";
    std::vector<uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), rgb.begin(), rgb.end());
    WriteFileBytes(path, out);
    return;
  }
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = png_uint_32(image.width());
  img.height = png_uint_32(image.height());
  img.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(img, size, 0, rgb.data(), 0, nullptr)) {
    Fail(ErrorKind::kIoError, path + ": " + img.message);
  }
  std::vector<uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, rgb.data(), 0, nullptr)) {
    Fail(ErrorKind::kIoError, path + ": " + img.message);
  }
  out.resize(size);
  WriteFileBytes(path, out);
}

}  // namespace wcv
