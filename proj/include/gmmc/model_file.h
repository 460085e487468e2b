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

// Binary parameter container ("GMMP").
//
// Layout: magic "GMMP", version byte, then named tensors until end of file,
// each as {u8 name length, name bytes, u8 rank, rank x u32 dims, f32 data},
// all little-endian.

#ifndef GMMC_MODEL_FILE_H_
#define GMMC_MODEL_FILE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gmmc {

inline constexpr uint8_t kModelFileVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<uint32_t> dims;
  std::vector<float> data;

  size_t element_count() const;
};

class ModelFile {
 public:
  void Add(NamedTensor tensor);

  // Throws kInvalidInput if absent or if the dims differ from `dims`.
  const NamedTensor& Get(std::string_view name,
                         std::span<const uint32_t> dims) const;
  const NamedTensor& Get(std::string_view name) const;
  bool Has(std::string_view name) const;

  const std::vector<NamedTensor>& tensors() const { return tensors_; }

  std::vector<uint8_t> Serialize() const;
  // Throws kCorruptStream on malformed bytes, kUnsupportedVersion on a
  // version byte other than kModelFileVersion.
  static ModelFile Parse(std::span<const uint8_t> bytes);

  void Save(const std::filesystem::path& path) const;
  static ModelFile Load(const std::filesystem::path& path);

 private:
  std::vector<NamedTensor> tensors_;
};

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes);

}  // namespace gmmc

#endif  // GMMC_MODEL_FILE_H_
