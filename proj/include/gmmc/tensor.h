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

#ifndef GMMC_TENSOR_H_
#define GMMC_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gmmc/error.h"

namespace gmmc {

struct Shape3 {
  size_t channels = 0;
  size_t height = 0;
  size_t width = 0;

  size_t size() const { return channels * height * width; }
  size_t plane() const { return height * width; }
  bool operator==(const Shape3&) const = default;

  std::string ToString() const {
    return "(" + std::to_string(channels) + "," + std::to_string(height) +
           "," + std::to_string(width) + ")";
  }
};

// Dense channel-major (C, H, W) array.
template <typename T>
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Shape3 shape, T fill = T{})
      : shape_(shape), data_(shape.size(), fill) {}
  Tensor3(size_t c, size_t h, size_t w, T fill = T{})
      : Tensor3(Shape3{c, h, w}, std::move(fill)) {}

  const Shape3& shape() const { return shape_; }
  size_t channels() const { return shape_.channels; }
  size_t height() const { return shape_.height; }
  size_t width() const { return shape_.width; }
  size_t size() const { return data_.size(); }

  size_t Index(size_t c, size_t y, size_t x) const {
    return (c * shape_.height + y) * shape_.width + x;
  }
  T& at(size_t c, size_t y, size_t x) { return data_[Index(c, y, x)]; }
  const T& at(size_t c, size_t y, size_t x) const {
    return data_[Index(c, y, x)];
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Tensor3&) const = default;

 private:
  Shape3 shape_;
  std::vector<T> data_;
};

using LatentTensor = Tensor3<int32_t>;
using RealTensor = Tensor3<double>;

inline void RequireShape(const Shape3& got, const Shape3& want,
                         const char* what) {
  if (!(got == want)) {
    throw Error(ErrorCode::kShapeError, std::string(what) + ": expected " +
                                            want.ToString() + ", got " +
                                            got.ToString());
  }
}

}  // namespace gmmc

#endif  // GMMC_TENSOR_H_
