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

// 8-bit PNG at the command-line boundary; pixels map to value / 255.

#ifndef GMMC_IMAGE_IO_H_
#define GMMC_IMAGE_IO_H_

#include <filesystem>

#include "gmmc/codec.h"

namespace gmmc {

// Gray, palette, alpha and 16-bit inputs are converted to 8-bit RGB.
// Throws kIoError on unreadable or malformed files.
ImagePlane ReadPng(const std::filesystem::path& path);

// Values are clamped to [0, 1] and rounded to the nearest 8-bit level.
void WritePng(const std::filesystem::path& path, const ImagePlane& image);

}  // namespace gmmc

#endif  // GMMC_IMAGE_IO_H_
