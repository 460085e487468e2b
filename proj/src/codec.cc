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

#include "gmmc/codec.h"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace gmmc {
namespace {

constexpr char kContainerMagic[4] = {'G', 'M', 'C', '1'};
constexpr size_t kDecodePixelLimit = size_t{1} << 28;

std::vector<double> ToDouble(const NamedTensor& t) {
  return std::vector<double>(t.data.begin(), t.data.end());
}

uint32_t Dim(size_t v) { return static_cast<uint32_t>(v); }

size_t ConfigValue(const NamedTensor& config, size_t i, const char* what) {
  const double v = config.data[i];
  if (!(v >= 1) || v != std::floor(v) || v > 65535) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("model config has invalid ") + what);
  }
  return static_cast<size_t>(v);
}

// Two passes of modified Gram-Schmidt; the shipped rows are orthonormal to
// float precision and come out orthonormal to double precision.
void Orthonormalize(std::vector<double>& rows, size_t count, size_t dim) {
  for (size_t pass = 0; pass < 2; ++pass) {
    for (size_t i = 0; i < count; ++i) {
      double* ri = &rows[i * dim];
      for (size_t j = 0; j < i; ++j) {
        const double* rj = &rows[j * dim];
        double dot = 0;
        for (size_t d = 0; d < dim; ++d) dot += ri[d] * rj[d];
        for (size_t d = 0; d < dim; ++d) ri[d] -= dot * rj[d];
      }
      double norm = 0;
      for (size_t d = 0; d < dim; ++d) norm += ri[d] * ri[d];
      norm = std::sqrt(norm);
      if (!(norm > 1e-6)) {
        throw Error(ErrorCode::kInvalidInput,
                    "analysis basis is rank deficient at row " +
                        std::to_string(i));
      }
      for (size_t d = 0; d < dim; ++d) ri[d] /= norm;
    }
  }
}

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  std::span<const uint8_t> Take(size_t n) {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kCorruptStream, "container truncated");
    }
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  uint8_t U8() { return Take(1)[0]; }
  uint16_t U16() {
    auto s = Take(2);
    return static_cast<uint16_t>(s[0] | s[1] << 8);
  }
  uint32_t U32() {
    auto s = Take(4);
    return uint32_t{s[0]} | uint32_t{s[1]} << 8 | uint32_t{s[2]} << 16 |
           uint32_t{s[3]} << 24;
  }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

void CheckImage(const ImagePlane& image) {
  if (image.channels() != kImageChannels || image.height() == 0 ||
      image.width() == 0) {
    throw Error(ErrorCode::kShapeError,
                "image must be [3, H, W] with H, W > 0, got " +
                    image.shape().ToString());
  }
}

}  // namespace

CodecModel CodecModel::FromFile(const ModelFile& file) {
  CodecModel m;
  const NamedTensor& config = file.Get("config");
  if (config.data.size() != 3) {
    throw Error(ErrorCode::kInvalidInput, "model config must hold K, N, Nz");
  }
  m.mixtures_ = ConfigValue(config, 0, "K");
  m.latent_channels_ = ConfigValue(config, 1, "N");
  m.hyper_latent_channels_ = ConfigValue(config, 2, "Nz");
  if (m.mixtures_ > kMaxMixtures || m.mixtures_ > 255) {
    throw Error(ErrorCode::kInvalidInput, "K too large");
  }
  if (m.latent_channels_ > kBlockDim) {
    throw Error(ErrorCode::kInvalidInput, "N exceeds the block dimension");
  }
  const size_t k = m.mixtures_;
  const size_t n = m.latent_channels_;
  const size_t nz = m.hyper_latent_channels_;

  const uint32_t basis_dims[] = {Dim(n), Dim(kBlockDim)};
  m.basis_ = ToDouble(file.Get("analysis.basis", basis_dims));
  Orthonormalize(m.basis_, n, kBlockDim);
  const uint32_t one[] = {1};
  m.offset_ = file.Get("analysis.offset", one).data[0];

  const uint32_t ha_dims[] = {Dim(nz), Dim(n)};
  m.hyper_analysis_ = ToDouble(file.Get("hyper.analysis", ha_dims));
  const uint32_t nz_dims[] = {Dim(nz)};
  m.hyper_prior_.mean = ToDouble(file.Get("hyper.prior_mean", nz_dims));
  m.hyper_prior_.scale = ToDouble(file.Get("hyper.prior_scale", nz_dims));
  for (size_t j = 0; j < nz; ++j) {
    m.hyper_prior_.scale[j] = std::max(m.hyper_prior_.scale[j], kSigmaFloor);
    m.hyper_cdfs_.push_back(QuantizeCdf(ComputePmfTable(GmmParams::Gaussian(
        m.hyper_prior_.mean[j], m.hyper_prior_.scale[j]))));
  }

  const NamedTensor& hs_w = file.Get("hyper.synthesis.weight");
  if (hs_w.dims.size() != 2 || hs_w.dims[1] != nz) {
    throw Error(ErrorCode::kInvalidInput, "hyper.synthesis.weight must be [Ch, Nz]");
  }
  const size_t ch = hs_w.dims[0];
  m.hyper_feature_channels_ = ch;
  m.hyper_synthesis_w_ = ToDouble(hs_w);
  const uint32_t ch_dims[] = {Dim(ch)};
  m.hyper_synthesis_b_ = ToDouble(file.Get("hyper.synthesis.bias", ch_dims));

  const NamedTensor& kernel = file.Get("context.kernel");
  if (kernel.dims.size() != 4 || kernel.dims[1] != n ||
      kernel.dims[2] != kContextKernel || kernel.dims[3] != kContextKernel) {
    throw Error(ErrorCode::kInvalidInput, "context.kernel must be [Cc, N, 5, 5]");
  }
  const size_t cc = kernel.dims[0];
  const uint32_t cc_dims[] = {Dim(cc)};
  m.context_.conv = MaskedConvWeights(
      cc, n, ToDouble(kernel), ToDouble(file.Get("context.bias", cc_dims)));

  const NamedTensor& w1 = file.Get("entropy.w1");
  if (w1.dims.size() != 2 || w1.dims[1] != cc + ch) {
    throw Error(ErrorCode::kInvalidInput, "entropy.w1 must be [hidden, Cc + Ch]");
  }
  const size_t hidden = w1.dims[0];
  const uint32_t b1_dims[] = {Dim(hidden)};
  const uint32_t w2_dims[] = {Dim(3 * k * n), Dim(hidden)};
  const uint32_t b2_dims[] = {Dim(3 * k * n)};
  m.context_.entropy = EntropyParamWeights(
      k, n, cc, ch, hidden, ToDouble(w1),
      ToDouble(file.Get("entropy.b1", b1_dims)),
      ToDouble(file.Get("entropy.w2", w2_dims)),
      ToDouble(file.Get("entropy.b2", b2_dims)));
  return m;
}

double CodecModel::QuantizationErrorBound() const {
  double max_norm = 0;
  for (size_t n = 0; n < latent_channels_; ++n) {
    double s = 0;
    for (double v : basis_row(n)) s += v * v;
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  return 0.5 * max_norm;
}

RealTensor CodecModel::HyperFeatures(const LatentTensor& z_hat,
                                     const Shape3& latent_shape) const {
  if (z_hat.channels() != hyper_latent_channels_ ||
      z_hat.height() * kHyperPool != latent_shape.height ||
      z_hat.width() * kHyperPool != latent_shape.width) {
    throw Error(ErrorCode::kShapeError,
                "hyper latents " + z_hat.shape().ToString() +
                    " misaligned with latent grid " + latent_shape.ToString());
  }
  const size_t ch = hyper_feature_channels_;
  const size_t nz = hyper_latent_channels_;
  RealTensor out(ch, latent_shape.height, latent_shape.width);
  std::vector<double> feat(ch);
  for (size_t zy = 0; zy < z_hat.height(); ++zy) {
    for (size_t zx = 0; zx < z_hat.width(); ++zx) {
      for (size_t c = 0; c < ch; ++c) {
        double acc = hyper_synthesis_b_[c];
        for (size_t j = 0; j < nz; ++j) {
          acc += hyper_synthesis_w_[c * nz + j] * z_hat.at(j, zy, zx);
        }
        feat[c] = acc;
      }
      for (size_t c = 0; c < ch; ++c) {
        for (size_t dy = 0; dy < kHyperPool; ++dy) {
          for (size_t dx = 0; dx < kHyperPool; ++dx) {
            out.at(c, zy * kHyperPool + dy, zx * kHyperPool + dx) = feat[c];
          }
        }
      }
    }
  }
  return out;
}

ImagePlane PadImage(const ImagePlane& image, size_t multiple) {
  const size_t h = (image.height() + multiple - 1) / multiple * multiple;
  const size_t w = (image.width() + multiple - 1) / multiple * multiple;
  ImagePlane out(image.channels(), h, w);
  for (size_t c = 0; c < image.channels(); ++c) {
    for (size_t y = 0; y < h; ++y) {
      const size_t sy = std::min(y, image.height() - 1);
      for (size_t x = 0; x < w; ++x) {
        out.at(c, y, x) = image.at(c, sy, std::min(x, image.width() - 1));
      }
    }
  }
  return out;
}

ImagePlane CropImage(const ImagePlane& image, size_t height, size_t width) {
  if (height > image.height() || width > image.width()) {
    throw Error(ErrorCode::kShapeError, "crop larger than image");
  }
  ImagePlane out(image.channels(), height, width);
  for (size_t c = 0; c < image.channels(); ++c) {
    for (size_t y = 0; y < height; ++y) {
      for (size_t x = 0; x < width; ++x) out.at(c, y, x) = image.at(c, y, x);
    }
  }
  return out;
}

AnalysisOutput AnalysisTransform(const ImagePlane& image,
                                 const CodecModel& model) {
  CheckImage(image);
  if (image.height() % kPadMultiple != 0 || image.width() % kPadMultiple != 0) {
    throw Error(ErrorCode::kShapeError,
                "analysis needs dims divisible by 64, got " +
                    image.shape().ToString());
  }
  const size_t n = model.latent_channels();
  const size_t lh = image.height() / kBlockSize;
  const size_t lw = image.width() / kBlockSize;
  AnalysisOutput out{RealTensor(n, lh, lw),
                     RealTensor(model.hyper_channels(), lh / kHyperPool,
                                lw / kHyperPool)};
  std::vector<double> block(kBlockDim);
  for (size_t by = 0; by < lh; ++by) {
    for (size_t bx = 0; bx < lw; ++bx) {
      size_t i = 0;
      for (size_t c = 0; c < kImageChannels; ++c) {
        for (size_t r = 0; r < kBlockSize; ++r) {
          for (size_t col = 0; col < kBlockSize; ++col) {
            block[i++] = image.at(c, by * kBlockSize + r, bx * kBlockSize + col) -
                         model.offset();
          }
        }
      }
      for (size_t k = 0; k < n; ++k) {
        const auto row = model.basis_row(k);
        double acc = 0;
        for (size_t d = 0; d < kBlockDim; ++d) acc += row[d] * block[d];
        out.y.at(k, by, bx) = acc;
      }
    }
  }

  std::vector<double> pooled(n);
  const double inv_area = 1.0 / (kHyperPool * kHyperPool);
  for (size_t zy = 0; zy < out.z.height(); ++zy) {
    for (size_t zx = 0; zx < out.z.width(); ++zx) {
      for (size_t k = 0; k < n; ++k) {
        double s = 0;
        for (size_t dy = 0; dy < kHyperPool; ++dy) {
          for (size_t dx = 0; dx < kHyperPool; ++dx) {
            s += std::abs(
                out.y.at(k, zy * kHyperPool + dy, zx * kHyperPool + dx));
          }
        }
        pooled[k] = s * inv_area;
      }
      for (size_t j = 0; j < model.hyper_channels(); ++j) {
        double acc = 0;
        for (size_t k = 0; k < n; ++k) {
          acc += model.HyperAnalysisWeight(j, k) * pooled[k];
        }
        out.z.at(j, zy, zx) = acc;
      }
    }
  }
  return out;
}

ImagePlane SynthesisTransform(const RealTensor& y, const CodecModel& model,
                              bool clamp) {
  if (y.channels() != model.latent_channels()) {
    throw Error(ErrorCode::kShapeError,
                "latents " + y.shape().ToString() + " vs model N=" +
                    std::to_string(model.latent_channels()));
  }
  ImagePlane image(kImageChannels, y.height() * kBlockSize,
                   y.width() * kBlockSize);
  std::vector<double> block(kBlockDim);
  for (size_t by = 0; by < y.height(); ++by) {
    for (size_t bx = 0; bx < y.width(); ++bx) {
      std::fill(block.begin(), block.end(), model.offset());
      for (size_t k = 0; k < y.channels(); ++k) {
        const double coeff = y.at(k, by, bx);
        if (coeff == 0) continue;
        const auto row = model.basis_row(k);
        for (size_t d = 0; d < kBlockDim; ++d) block[d] += coeff * row[d];
      }
      size_t i = 0;
      for (size_t c = 0; c < kImageChannels; ++c) {
        for (size_t r = 0; r < kBlockSize; ++r) {
          for (size_t col = 0; col < kBlockSize; ++col) {
            const double v = block[i++];
            image.at(c, by * kBlockSize + r, bx * kBlockSize + col) =
                clamp ? std::clamp(v, 0.0, 1.0) : v;
          }
        }
      }
    }
  }
  return image;
}

ImagePlane SynthesisTransform(const LatentTensor& y_hat,
                              const CodecModel& model) {
  RealTensor y(y_hat.shape());
  std::copy(y_hat.data().begin(), y_hat.data().end(), y.data().begin());
  return SynthesisTransform(y, model, true);
}

std::vector<uint8_t> ZeroChannelFlags(const LatentTensor& y_hat) {
  std::vector<uint8_t> flags((y_hat.channels() + 7) / 8, 0);
  const size_t plane = y_hat.shape().plane();
  for (size_t c = 0; c < y_hat.channels(); ++c) {
    const auto first = y_hat.data().begin() + c * plane;
    if (std::all_of(first, first + plane, [](int32_t v) { return v == 0; })) {
      flags[c / 8] |= static_cast<uint8_t>(1u << (c % 8));
    }
  }
  return flags;
}

std::vector<bool> UnpackChannelFlags(std::span<const uint8_t> flags,
                                     size_t channels) {
  if (flags.size() != (channels + 7) / 8) {
    throw Error(ErrorCode::kShapeError, "flag byte count does not match N");
  }
  std::vector<bool> skip(channels);
  for (size_t c = 0; c < channels; ++c) {
    skip[c] = (flags[c / 8] >> (c % 8)) & 1;
  }
  return skip;
}

uint32_t Crc32(std::span<const uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes 32-bit lengths.
  size_t pos = 0;
  while (pos < bytes.size()) {
    const uInt n = static_cast<uInt>(std::min<size_t>(bytes.size() - pos, 1u << 30));
    crc = crc32(crc, bytes.data() + pos, n);
    pos += n;
  }
  return static_cast<uint32_t>(crc);
}

std::vector<uint8_t> BitstreamContainer::Serialize() const {
  std::vector<uint8_t> out(std::begin(kContainerMagic), std::end(kContainerMagic));
  out.push_back(version);
  out.push_back(mixtures);
  PutU16(out, channels);
  PutU32(out, width);
  PutU32(out, height);
  out.insert(out.end(), zero_flags.begin(), zero_flags.end());
  PutU32(out, static_cast<uint32_t>(hyper_payload.size()));
  out.insert(out.end(), hyper_payload.begin(), hyper_payload.end());
  PutU32(out, static_cast<uint32_t>(main_payload.size()));
  out.insert(out.end(), main_payload.begin(), main_payload.end());
  PutU32(out, Crc32(out));
  return out;
}

BitstreamContainer BitstreamContainer::Parse(std::span<const uint8_t> bytes) {
  if (bytes.size() < kFixedHeaderBytes + 12) {
    throw Error(ErrorCode::kCorruptStream, "container too short");
  }
  if (std::memcmp(bytes.data(), kContainerMagic, 4) != 0) {
    throw Error(ErrorCode::kCorruptStream, "bad container magic");
  }
  if (bytes[4] != kContainerVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "container version " + std::to_string(bytes[4]));
  }
  const auto body = bytes.first(bytes.size() - 4);
  ByteReader trailer(bytes.last(4));
  if (trailer.U32() != Crc32(body)) {
    throw Error(ErrorCode::kCorruptStream, "crc mismatch");
  }

  ByteReader in(body);
  in.Take(4);
  BitstreamContainer c;
  c.version = in.U8();
  c.mixtures = in.U8();
  c.channels = in.U16();
  c.width = in.U32();
  c.height = in.U32();
  auto flags = in.Take((c.channels + 7u) / 8u);
  c.zero_flags.assign(flags.begin(), flags.end());
  if (c.channels % 8 != 0 &&
      (c.zero_flags.back() >> (c.channels % 8)) != 0) {
    throw Error(ErrorCode::kCorruptStream, "flag padding bits set");
  }
  auto hyper = in.Take(in.U32());
  c.hyper_payload.assign(hyper.begin(), hyper.end());
  auto main = in.Take(in.U32());
  c.main_payload.assign(main.begin(), main.end());
  if (in.remaining() != 0) {
    throw Error(ErrorCode::kCorruptStream, "payload lengths do not cover the container");
  }
  return c;
}

EncodeResult EncodeImage(const ImagePlane& image, const CodecModel& model,
                         const EncodeOptions& options) {
  CheckImage(image);
  if (image.height() * image.width() > options.max_pixels) {
    throw Error(ErrorCode::kResourceLimit,
                std::to_string(image.height() * image.width()) +
                    " pixels exceeds the limit of " +
                    std::to_string(options.max_pixels));
  }
  if (image.width() > UINT32_MAX || image.height() > UINT32_MAX) {
    throw Error(ErrorCode::kResourceLimit, "image dims exceed 32 bits");
  }
  for (double v : image.data()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidInput, "non-finite pixel value");
    }
  }

  EncodeResult res;
  const AnalysisOutput analysis = AnalysisTransform(PadImage(image), model);
  res.z_hat = QuantizeLatent(analysis.z);
  res.y_hat = QuantizeLatent(analysis.y);
  const RealTensor hyper = model.HyperFeatures(res.z_hat, res.y_hat.shape());
  const GmmParamTensor params =
      ForwardParams(res.y_hat, hyper, model.context());

  BitstreamContainer& c = res.container;
  c.mixtures = static_cast<uint8_t>(model.mixtures());
  c.channels = static_cast<uint16_t>(model.latent_channels());
  c.width = static_cast<uint32_t>(image.width());
  c.height = static_cast<uint32_t>(image.height());
  c.zero_flags = options.skip_zero_channels
                     ? ZeroChannelFlags(res.y_hat)
                     : std::vector<uint8_t>((model.latent_channels() + 7) / 8, 0);
  const std::vector<bool> skip =
      UnpackChannelFlags(c.zero_flags, model.latent_channels());
  res.zero_channels =
      static_cast<size_t>(std::count(skip.begin(), skip.end(), true));

  {
    RangeEncoder enc;
    const size_t plane = res.z_hat.shape().plane();
    for (size_t i = 0; i < res.z_hat.size(); ++i) {
      const int32_t s = res.z_hat.data()[i];
      const size_t ch = i / plane;
      enc.Encode(s, model.hyper_cdf(ch));
      res.z_rate.quantized_bits += model.hyper_cdf(ch).CostBits(s);
      res.z_rate.estimated_bits -= std::log2(std::max(
          DiscretizedPmf(s, GmmParams::Gaussian(model.hyper_prior().mean[ch],
                                                model.hyper_prior().scale[ch])),
          kMinPmf));
    }
    res.z_rate.symbols = res.z_hat.size();
    c.hyper_payload = enc.Finish().bytes;
    res.z_rate.actual_bits = 8 * c.hyper_payload.size();
  }

  for (size_t i = 0; i < res.y_hat.size(); ++i) {
    const double bits = -std::log2(
        std::max(DiscretizedPmf(res.y_hat.data()[i], params.data()[i]), kMinPmf));
    res.model_bits_y += bits;
    if (!skip[i / res.y_hat.shape().plane()]) res.y_rate.estimated_bits += bits;
  }
  {
    RangeEncoder enc;
    res.y_rate.symbols = EncodeLatents(res.y_hat, params, skip, enc,
                                       options.threads,
                                       &res.y_rate.quantized_bits);
    if (res.y_rate.symbols > 0) c.main_payload = enc.Finish().bytes;
    res.y_rate.actual_bits = 8 * c.main_payload.size();
  }

  res.bytes = c.Serialize();
  res.bpp = Bpp(res.bytes.size(), image.width(), image.height());
  return res;
}

DecodeResult DecodeImage(std::span<const uint8_t> bytes,
                         const CodecModel& model) {
  const BitstreamContainer c = BitstreamContainer::Parse(bytes);
  if (c.mixtures != model.mixtures() || c.channels != model.latent_channels()) {
    throw Error(ErrorCode::kModelMismatch,
                "stream has K=" + std::to_string(c.mixtures) +
                    " N=" + std::to_string(c.channels) + ", model has K=" +
                    std::to_string(model.mixtures()) +
                    " N=" + std::to_string(model.latent_channels()));
  }
  if (c.width == 0 || c.height == 0) {
    throw Error(ErrorCode::kCorruptStream, "zero image dimension");
  }
  if (uint64_t{c.width} * c.height > kDecodePixelLimit) {
    throw Error(ErrorCode::kResourceLimit, "stream declares an oversized image");
  }
  const size_t ph = (c.height + kPadMultiple - 1) / kPadMultiple * kPadMultiple;
  const size_t pw = (c.width + kPadMultiple - 1) / kPadMultiple * kPadMultiple;
  const Shape3 y_shape{model.latent_channels(), ph / kBlockSize, pw / kBlockSize};
  const Shape3 z_shape{model.hyper_channels(), ph / kPadMultiple,
                       pw / kPadMultiple};

  DecodeResult res;
  try {
    res.z_hat = LatentTensor(z_shape);
    RangeDecoder dec(c.hyper_payload);
    const size_t plane = z_shape.plane();
    for (size_t i = 0; i < res.z_hat.size(); ++i) {
      res.z_hat.data()[i] = dec.Decode(model.hyper_cdf(i / plane));
    }
    dec.Finish();

    const RealTensor hyper = model.HyperFeatures(res.z_hat, y_shape);
    const std::vector<bool> skip =
        UnpackChannelFlags(c.zero_flags, model.latent_channels());
    Bitstream main;
    main.bytes = c.main_payload;
    main.bit_length = 8 * main.bytes.size();
    res.y_hat = SerialDecode(main, hyper, model.context(), y_shape, skip);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTruncatedStream ||
        e.code() == ErrorCode::kDecodeError ||
        e.code() == ErrorCode::kInvalidInput) {
      throw Error(ErrorCode::kCorruptStream, e.what());
    }
    throw;
  }
  res.image = CropImage(SynthesisTransform(res.y_hat, model), c.height, c.width);
  return res;
}

double Bpp(size_t container_bytes, size_t width, size_t height) {
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kInvalidInput, "bpp needs nonzero dimensions");
  }
  return 8.0 * static_cast<double>(container_bytes) /
         (static_cast<double>(width) * static_cast<double>(height));
}

std::string LatentChecksum(const LatentTensor& latents) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (int32_t v : latents.data()) {
    const uint32_t u = static_cast<uint32_t>(v);
    for (int i = 0; i < 4; ++i) {
      h ^= (u >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gmmc
