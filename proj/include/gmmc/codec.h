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

// End-to-end image codec around the mixture entropy model.
//
// The analysis transform is a fixed orthonormal blockwise basis: each 16x16
// RGB block (768 values) is projected onto the first N basis rows, giving a
// latent grid downsampled 16x per axis. Side information z is a linear map
// of 4x4-pooled |y|, coded under a static per-channel Gaussian prior. Its
// decoded value conditions the latent entropy model through a 1x1 layer.
//
// Container layout (little-endian):
//   "GMC1" | u8 version | u8 K | u16 N | u32 width | u32 height |
//   ceil(N/8) zero-channel flag bytes | u32 hyper length | hyper payload |
//   u32 main length | main payload | u32 crc32 of all preceding bytes
// Bit (j % 8) of flag byte j / 8 marks channel j as all-zero; such channels
// are absent from the main payload.

#ifndef GMMC_CODEC_H_
#define GMMC_CODEC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmmc/context_model.h"
#include "gmmc/model_file.h"
#include "gmmc/range_coder.h"
#include "gmmc/tensor.h"

namespace gmmc {

inline constexpr size_t kImageChannels = 3;
inline constexpr size_t kBlockSize = 16;
inline constexpr size_t kBlockDim = kImageChannels * kBlockSize * kBlockSize;
inline constexpr size_t kHyperPool = 4;
inline constexpr size_t kPadMultiple = kBlockSize * kHyperPool;
inline constexpr uint8_t kContainerVersion = 1;

// [3, H, W] pixels in [0, 1].
using ImagePlane = RealTensor;

struct HyperModel {
  std::vector<double> mean;   // per z channel
  std::vector<double> scale;  // per z channel, >= kSigmaFloor
};

class CodecModel {
 public:
  // Throws kInvalidInput when tensors are missing or inconsistent.
  static CodecModel FromFile(const ModelFile& file);

  size_t mixtures() const { return mixtures_; }
  size_t latent_channels() const { return latent_channels_; }
  size_t hyper_channels() const { return hyper_latent_channels_; }

  // Row n of the [N, 768] analysis basis, orthonormalized in double
  // precision at load time.
  std::span<const double> basis_row(size_t n) const {
    return {&basis_[n * kBlockDim], kBlockDim};
  }
  double offset() const { return offset_; }
  const ContextModel& context() const { return context_; }
  const HyperModel& hyper_prior() const { return hyper_prior_; }
  const QuantizedCdf& hyper_cdf(size_t channel) const {
    return hyper_cdfs_[channel];
  }

  // z channel j at one hyper position from pooled |y|.
  double HyperAnalysisWeight(size_t j, size_t n) const {
    return hyper_analysis_[j * latent_channels_ + n];
  }

  // Largest per-pixel RMS error quantizing the latents can cause:
  // half the largest basis row norm.
  double QuantizationErrorBound() const;

  RealTensor HyperFeatures(const LatentTensor& z_hat,
                           const Shape3& latent_shape) const;

 private:
  size_t mixtures_ = 0;
  size_t latent_channels_ = 0;
  size_t hyper_latent_channels_ = 0;
  std::vector<double> basis_;
  double offset_ = 0;
  std::vector<double> hyper_analysis_;
  HyperModel hyper_prior_;
  std::vector<QuantizedCdf> hyper_cdfs_;
  size_t hyper_feature_channels_ = 0;
  std::vector<double> hyper_synthesis_w_;
  std::vector<double> hyper_synthesis_b_;
  ContextModel context_;
};

// Replicates edge pixels up to the next multiple of `multiple` per axis.
ImagePlane PadImage(const ImagePlane& image, size_t multiple = kPadMultiple);
ImagePlane CropImage(const ImagePlane& image, size_t height, size_t width);

struct AnalysisOutput {
  RealTensor y;  // [N, H/16, W/16]
  RealTensor z;  // [Nz, H/64, W/64]
};

// Throws kShapeError unless the image has 3 channels and both dims are
// positive multiples of 64.
AnalysisOutput AnalysisTransform(const ImagePlane& image,
                                 const CodecModel& model);

// Inverse basis application. Output is clamped to [0, 1] when `clamp`.
ImagePlane SynthesisTransform(const RealTensor& y, const CodecModel& model,
                              bool clamp = true);
ImagePlane SynthesisTransform(const LatentTensor& y_hat,
                              const CodecModel& model);

std::vector<uint8_t> ZeroChannelFlags(const LatentTensor& y_hat);
std::vector<bool> UnpackChannelFlags(std::span<const uint8_t> flags,
                                     size_t channels);

struct BitstreamContainer {
  uint8_t version = kContainerVersion;
  uint8_t mixtures = 0;
  uint16_t channels = 0;
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> zero_flags;
  std::vector<uint8_t> hyper_payload;
  std::vector<uint8_t> main_payload;

  // Appends the crc32 trailer.
  std::vector<uint8_t> Serialize() const;
  // Throws kCorruptStream for bad magic, length or crc and
  // kUnsupportedVersion for a version other than kContainerVersion.
  static BitstreamContainer Parse(std::span<const uint8_t> bytes);

  // Fixed fields before the flag bytes.
  static constexpr size_t kFixedHeaderBytes = 16;
};

struct EncodeOptions {
  size_t threads = 1;
  size_t max_pixels = size_t{1} << 24;
  // When false every channel is coded and the flag bytes stay zero.
  bool skip_zero_channels = true;
};

struct RateLedger {
  double estimated_bits = 0;  // sum of -log2 pmf over coded symbols
  double quantized_bits = 0;  // same under the quantized tables
  uint64_t actual_bits = 0;   // payload bytes * 8
  size_t symbols = 0;
};

struct EncodeResult {
  std::vector<uint8_t> bytes;
  BitstreamContainer container;
  LatentTensor y_hat;
  LatentTensor z_hat;
  RateLedger y_rate;
  RateLedger z_rate;
  // Rate of the whole latent tensor under the model, skipped channels
  // included.
  double model_bits_y = 0;
  size_t zero_channels = 0;
  double bpp = 0;
};

EncodeResult EncodeImage(const ImagePlane& image, const CodecModel& model,
                         const EncodeOptions& options = {});

struct DecodeResult {
  ImagePlane image;  // cropped to the original size
  LatentTensor y_hat;
  LatentTensor z_hat;
};

// Any inconsistency between stream and model surfaces as kCorruptStream,
// except a K/N disagreement with the model, which is kModelMismatch.
DecodeResult DecodeImage(std::span<const uint8_t> bytes,
                         const CodecModel& model);

// 8 * bytes / (width * height); throws kInvalidInput for zero dims.
double Bpp(size_t container_bytes, size_t width, size_t height);

// FNV-1a over the little-endian symbol bytes, as 16 hex digits.
std::string LatentChecksum(const LatentTensor& latents);

uint32_t Crc32(std::span<const uint8_t> bytes);

}  // namespace gmmc

#endif  // GMMC_CODEC_H_
