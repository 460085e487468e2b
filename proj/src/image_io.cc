// Copyright 2026 The GMMC Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gmmc/image_io.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace gmmc {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr Open(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return f;
}

}  // namespace

ImagePlane ReadPng(const std::filesystem::path& path) {
  FilePtr file = Open(path, "rb");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_stdio(&image, file.get())) {
    throw Error(ErrorCode::kIoError,
                path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::kIoError, path.string() + ": " + image.message);
  }
  const size_t h = image.height, w = image.width;
  ImagePlane out(3, h, w);
  for (size_t y = 0; y < h; ++y) {
    for (size_t x = 0; x < w; ++x) {
      for (size_t c = 0; c < 3; ++c) {
        out.at(c, y, x) = buf[(y * w + x) * 3 + c] / 255.0;
      }
    }
  }
  return out;
}

void WritePng(const std::filesystem::path& path, const ImagePlane& img) {
  if (img.channels() != 3 || img.height() == 0 || img.width() == 0) {
    throw Error(ErrorCode::kShapeError, "PNG output needs a [3, H, W] image");
  }
  const size_t h = img.height(), w = img.width();
  std::vector<png_byte> buf(h * w * 3);
  for (size_t y = 0; y < h; ++y) {
    for (size_t x = 0; x < w; ++x) {
      for (size_t c = 0; c < 3; ++c) {
        const double v = std::clamp(img.at(c, y, x), 0.0, 1.0);
        buf[(y * w + x) * 3 + c] = static_cast<png_byte>(std::lround(v * 255.0));
      }
    }
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = PNG_FORMAT_RGB;
  FilePtr file = Open(path, "wb");
  if (!png_image_write_to_stdio(&image, file.get(), 0, buf.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIoError, path.string() + ": " + image.message);
  }
}

}  // namespace gmmc
