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

#include "gmmc/model_file.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "gmmc/error.h"

namespace gmmc {
namespace {

constexpr char kMagic[4] = {'G', 'M', 'M', 'P'};

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }

  std::span<const uint8_t> Take(size_t n) {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kCorruptStream, "model file truncated");
    }
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  uint8_t U8() { return Take(1)[0]; }
  uint32_t U32() {
    auto s = Take(4);
    return uint32_t{s[0]} | uint32_t{s[1]} << 8 | uint32_t{s[2]} << 16 |
           uint32_t{s[3]} << 24;
  }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

}  // namespace

size_t NamedTensor::element_count() const {
  size_t n = 1;
  for (uint32_t d : dims) n *= d;
  return n;
}

void ModelFile::Add(NamedTensor tensor) {
  if (tensor.name.empty() || tensor.name.size() > 255) {
    throw Error(ErrorCode::kInvalidInput, "tensor name must be 1..255 bytes");
  }
  if (tensor.dims.size() > 255 || tensor.element_count() != tensor.data.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "tensor '" + tensor.name + "' dims do not match its data");
  }
  if (Has(tensor.name)) {
    throw Error(ErrorCode::kInvalidInput, "duplicate tensor '" + tensor.name + "'");
  }
  tensors_.push_back(std::move(tensor));
}

bool ModelFile::Has(std::string_view name) const {
  for (const auto& t : tensors_) {
    if (t.name == name) return true;
  }
  return false;
}

const NamedTensor& ModelFile::Get(std::string_view name) const {
  for (const auto& t : tensors_) {
    if (t.name == name) return t;
  }
  throw Error(ErrorCode::kInvalidInput,
              "model file has no tensor '" + std::string(name) + "'");
}

const NamedTensor& ModelFile::Get(std::string_view name,
                                  std::span<const uint32_t> dims) const {
  const NamedTensor& t = Get(name);
  if (!std::equal(t.dims.begin(), t.dims.end(), dims.begin(), dims.end())) {
    std::string want, got;
    for (uint32_t d : dims) want += std::to_string(d) + " ";
    for (uint32_t d : t.dims) got += std::to_string(d) + " ";
    throw Error(ErrorCode::kInvalidInput, "tensor '" + std::string(name) +
                                              "' has dims [" + got +
                                              "], expected [" + want + "]");
  }
  return t;
}

std::vector<uint8_t> ModelFile::Serialize() const {
  std::vector<uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(kModelFileVersion);
  for (const auto& t : tensors_) {
    out.push_back(static_cast<uint8_t>(t.name.size()));
    out.insert(out.end(), t.name.begin(), t.name.end());
    out.push_back(static_cast<uint8_t>(t.dims.size()));
    for (uint32_t d : t.dims) PutU32(out, d);
    for (float f : t.data) PutU32(out, std::bit_cast<uint32_t>(f));
  }
  return out;
}

ModelFile ModelFile::Parse(std::span<const uint8_t> bytes) {
  Reader in(bytes);
  auto magic = in.Take(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kCorruptStream, "not a GMMP model file");
  }
  const uint8_t version = in.U8();
  if (version != kModelFileVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "model file version " + std::to_string(version));
  }
  ModelFile model;
  while (!in.done()) {
    NamedTensor t;
    const uint8_t name_len = in.U8();
    auto name = in.Take(name_len);
    t.name.assign(name.begin(), name.end());
    const uint8_t rank = in.U8();
    uint64_t count = 1;
    for (uint8_t i = 0; i < rank; ++i) {
      t.dims.push_back(in.U32());
      count *= t.dims.back();
      if (count > (uint64_t{1} << 32)) {
        throw Error(ErrorCode::kCorruptStream, "tensor too large");
      }
    }
    auto raw = in.Take(count * 4);
    t.data.resize(count);
    for (size_t i = 0; i < count; ++i) {
      const uint32_t bits = uint32_t{raw[4 * i]} | uint32_t{raw[4 * i + 1]} << 8 |
                            uint32_t{raw[4 * i + 2]} << 16 |
                            uint32_t{raw[4 * i + 3]} << 24;
      t.data[i] = std::bit_cast<float>(bits);
    }
    try {
      model.Add(std::move(t));
    } catch (const Error& e) {
      throw Error(ErrorCode::kCorruptStream, e.what());
    }
  }
  return model;
}

void ModelFile::Save(const std::filesystem::path& path) const {
  WriteFileBytes(path, Serialize());
}

ModelFile ModelFile::Load(const std::filesystem::path& path) {
  return Parse(ReadFileBytes(path));
}

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failed: " + path.string());
  return bytes;
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot create " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace gmmc
