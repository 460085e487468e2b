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

#include "gmmc/context_model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmmc/parallel.h"

namespace gmmc {
namespace {

// Shared by the full-tensor and per-window paths so both accumulate in the
// same order. fetch(channel, kernel_row, kernel_col) returns the input.
template <typename Fetch>
double CausalDot(const MaskedConvWeights& w, size_t o, Fetch&& fetch) {
  double acc = w.bias(o);
  for (size_t r = 0; r <= kContextRadius; ++r) {
    for (size_t c = 0; c < kContextKernel; ++c) {
      if (!IsCausalTap(r, c)) continue;
      for (size_t i = 0; i < w.in_channels(); ++i) {
        acc += w.kernel(o, i, r, c) * fetch(i, r, c);
      }
    }
  }
  return acc;
}

void CheckSize(const std::vector<double>& v, size_t want, const char* what) {
  if (v.size() != want) {
    throw Error(ErrorCode::kShapeError,
                std::string(what) + ": expected " + std::to_string(want) +
                    " values, got " + std::to_string(v.size()));
  }
}

size_t CountCoded(const Shape3& shape, const std::vector<bool>& skip) {
  size_t live = 0;
  for (bool s : skip) live += s ? 0 : 1;
  return live * shape.plane();
}

void CheckSkip(const Shape3& shape, const std::vector<bool>& skip) {
  if (skip.size() != shape.channels) {
    throw Error(ErrorCode::kShapeError,
                "skip flags: expected " + std::to_string(shape.channels) +
                    " entries, got " + std::to_string(skip.size()));
  }
}

}  // namespace

MaskedConvWeights::MaskedConvWeights(size_t out_channels, size_t in_channels,
                                     std::vector<double> kernel,
                                     std::vector<double> bias)
    : out_channels_(out_channels),
      in_channels_(in_channels),
      kernel_(std::move(kernel)),
      bias_(std::move(bias)) {
  CheckSize(kernel_, out_channels * in_channels * kContextKernel * kContextKernel,
            "masked conv kernel");
  CheckSize(bias_, out_channels, "masked conv bias");
  for (size_t o = 0; o < out_channels; ++o) {
    for (size_t i = 0; i < in_channels; ++i) {
      for (size_t r = 0; r < kContextKernel; ++r) {
        for (size_t c = 0; c < kContextKernel; ++c) {
          if (IsCausalTap(r, c)) continue;
          kernel_[((o * in_channels + i) * kContextKernel + r) * kContextKernel +
                  c] = 0.0;
        }
      }
    }
  }
}

EntropyParamWeights::EntropyParamWeights(
    size_t mixtures, size_t latent_channels, size_t context_channels,
    size_t hyper_channels, size_t hidden, std::vector<double> w1,
    std::vector<double> b1, std::vector<double> w2, std::vector<double> b2)
    : mixtures_(mixtures),
      latent_channels_(latent_channels),
      context_channels_(context_channels),
      hyper_channels_(hyper_channels),
      hidden_(hidden),
      w1_(std::move(w1)),
      b1_(std::move(b1)),
      w2_(std::move(w2)),
      b2_(std::move(b2)) {
  if (mixtures == 0 || mixtures > kMaxMixtures) {
    throw Error(ErrorCode::kInvalidInput,
                "mixture count " + std::to_string(mixtures) + " unsupported");
  }
  CheckSize(w1_, hidden * input_width(), "entropy w1");
  CheckSize(b1_, hidden, "entropy b1");
  CheckSize(w2_, output_width() * hidden, "entropy w2");
  CheckSize(b2_, output_width(), "entropy b2");
}

double Softplus(double x) {
  // log(1 + e^x) without overflow for large x.
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

void Softmax(std::span<const double> logits, std::span<double> out) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (size_t i = 0; i < logits.size(); ++i) out[i] /= sum;
}

ContextWindow ExtractWindow(const LatentTensor& partial, size_t row,
                            size_t col) {
  if (row >= partial.height() || col >= partial.width()) {
    throw Error(ErrorCode::kIndexError,
                "window center (" + std::to_string(row) + "," +
                    std::to_string(col) + ") outside " +
                    partial.shape().ToString());
  }
  ContextWindow window(partial.channels());
  for (size_t r = 0; r < kContextKernel; ++r) {
    const ptrdiff_t y = static_cast<ptrdiff_t>(row + r) -
                        static_cast<ptrdiff_t>(kContextRadius);
    if (y < 0 || y >= static_cast<ptrdiff_t>(partial.height())) continue;
    for (size_t c = 0; c < kContextKernel; ++c) {
      if (!IsCausalTap(r, c)) continue;
      const ptrdiff_t x = static_cast<ptrdiff_t>(col + c) -
                          static_cast<ptrdiff_t>(kContextRadius);
      if (x < 0 || x >= static_cast<ptrdiff_t>(partial.width())) continue;
      for (size_t i = 0; i < partial.channels(); ++i) {
        window.at(i, r, c) = partial.at(i, static_cast<size_t>(y),
                                        static_cast<size_t>(x));
      }
    }
  }
  return window;
}

std::vector<double> MaskedConvAt(const ContextWindow& window,
                                 const MaskedConvWeights& w) {
  if (window.channels() != w.in_channels()) {
    throw Error(ErrorCode::kShapeError,
                "window has " + std::to_string(window.channels()) +
                    " channels, kernel expects " +
                    std::to_string(w.in_channels()));
  }
  std::vector<double> out(w.out_channels());
  for (size_t o = 0; o < w.out_channels(); ++o) {
    out[o] = CausalDot(w, o, [&](size_t i, size_t r, size_t c) {
      return window.at(i, r, c);
    });
  }
  return out;
}

RealTensor MaskedConvForward(const LatentTensor& latents,
                             const MaskedConvWeights& w) {
  if (latents.channels() != w.in_channels()) {
    throw Error(ErrorCode::kShapeError,
                "latents have " + std::to_string(latents.channels()) +
                    " channels, kernel expects " + std::to_string(w.in_channels()));
  }
  const size_t h = latents.height();
  const size_t wd = latents.width();
  RealTensor out(w.out_channels(), h, wd);
  for (size_t y = 0; y < h; ++y) {
    for (size_t x = 0; x < wd; ++x) {
      auto fetch = [&](size_t i, size_t r, size_t c) -> double {
        const ptrdiff_t yy = static_cast<ptrdiff_t>(y + r) - 2;
        const ptrdiff_t xx = static_cast<ptrdiff_t>(x + c) - 2;
        if (yy < 0 || xx < 0 || xx >= static_cast<ptrdiff_t>(wd)) return 0.0;
        return latents.at(i, static_cast<size_t>(yy), static_cast<size_t>(xx));
      };
      for (size_t o = 0; o < w.out_channels(); ++o) {
        out.at(o, y, x) = CausalDot(w, o, fetch);
      }
    }
  }
  return out;
}

std::vector<GmmParams> EntropyParamsAt(std::span<const double> context,
                                       std::span<const double> hyper,
                                       const EntropyParamWeights& w) {
  if (context.size() != w.context_channels() ||
      hyper.size() != w.hyper_channels()) {
    throw Error(ErrorCode::kShapeError,
                "entropy network input width mismatch");
  }
  const size_t in_width = w.input_width();
  std::vector<double> input(in_width);
  std::copy(context.begin(), context.end(), input.begin());
  std::copy(hyper.begin(), hyper.end(), input.begin() + context.size());

  std::vector<double> hidden(w.hidden());
  for (size_t h = 0; h < w.hidden(); ++h) {
    double acc = w.b1()[h];
    const double* row = &w.w1()[h * in_width];
    for (size_t i = 0; i < in_width; ++i) acc += row[i] * input[i];
    hidden[h] = std::max(acc, 0.0);
  }

  const size_t k = w.mixtures();
  std::vector<double> out(w.output_width());
  for (size_t o = 0; o < out.size(); ++o) {
    double acc = w.b2()[o];
    const double* row = &w.w2()[o * w.hidden()];
    for (size_t h = 0; h < w.hidden(); ++h) acc += row[h] * hidden[h];
    out[o] = acc;
  }

  std::vector<GmmParams> params;
  params.reserve(w.latent_channels());
  std::array<double, kMaxMixtures> weights, scales;
  for (size_t n = 0; n < w.latent_channels(); ++n) {
    const double* logits = &out[(3 * n + 0) * k];
    const double* means = &out[(3 * n + 1) * k];
    const double* raw_scales = &out[(3 * n + 2) * k];
    Softmax({logits, k}, {weights.data(), k});
    for (size_t j = 0; j < k; ++j) {
      scales[j] = std::max(Softplus(raw_scales[j]), kSigmaFloor);
    }
    params.push_back(GmmParams::Create({weights.data(), k}, {means, k},
                                       {scales.data(), k}));
  }
  return params;
}

GmmParamTensor EntropyParams(const RealTensor& context, const RealTensor& hyper,
                             const EntropyParamWeights& w) {
  if (context.height() != hyper.height() || context.width() != hyper.width()) {
    throw Error(ErrorCode::kShapeError,
                "context " + context.shape().ToString() + " vs hyper " +
                    hyper.shape().ToString());
  }
  const size_t h = context.height();
  const size_t wd = context.width();
  GmmParamTensor out(w.latent_channels(), h, wd);
  std::vector<double> ctx(context.channels());
  std::vector<double> hyp(hyper.channels());
  for (size_t y = 0; y < h; ++y) {
    for (size_t x = 0; x < wd; ++x) {
      for (size_t c = 0; c < ctx.size(); ++c) ctx[c] = context.at(c, y, x);
      for (size_t c = 0; c < hyp.size(); ++c) hyp[c] = hyper.at(c, y, x);
      auto params = EntropyParamsAt(ctx, hyp, w);
      for (size_t n = 0; n < params.size(); ++n) out.at(n, y, x) = params[n];
    }
  }
  return out;
}

GmmParamTensor ForwardParams(const LatentTensor& latents,
                             const RealTensor& hyper,
                             const ContextModel& model) {
  return EntropyParams(MaskedConvForward(latents, model.conv), hyper,
                       model.entropy);
}

size_t EncodeLatents(const LatentTensor& latents, const GmmParamTensor& params,
                     const std::vector<bool>& skip, RangeEncoder& encoder,
                     size_t threads, double* quantized_bits) {
  RequireShape(params.shape(), latents.shape(), "EncodeLatents params");
  CheckSkip(latents.shape(), skip);
  std::vector<size_t> live;
  for (size_t c = 0; c < skip.size(); ++c) {
    if (!skip[c]) live.push_back(c);
  }
  if (live.empty()) return 0;

  // Tables for a batch of positions are built in parallel, then coded in
  // order.
  const size_t positions = latents.shape().plane();
  const size_t batch = std::max<size_t>(1, 4096 / live.size());
  std::vector<QuantizedCdf> cdfs;
  size_t coded = 0;
  for (size_t p0 = 0; p0 < positions; p0 += batch) {
    const size_t p1 = std::min(positions, p0 + batch);
    const size_t count = (p1 - p0) * live.size();
    cdfs.resize(count);
    ParallelFor(count, threads, [&](size_t begin, size_t end) {
      for (size_t i = begin; i < end; ++i) {
        const size_t p = p0 + i / live.size();
        const size_t c = live[i % live.size()];
        cdfs[i] = QuantizeCdf(ComputePmfTable(
            params.at(c, p / latents.width(), p % latents.width())));
      }
    });
    for (size_t i = 0; i < count; ++i) {
      const size_t p = p0 + i / live.size();
      const size_t c = live[i % live.size()];
      const int32_t symbol =
          latents.at(c, p / latents.width(), p % latents.width());
      encoder.Encode(symbol, cdfs[i]);
      if (quantized_bits != nullptr) *quantized_bits += cdfs[i].CostBits(symbol);
      ++coded;
    }
  }
  return coded;
}

namespace {

LatentTensor SerialDecodeImpl(RangeDecoder* decoder, const RealTensor& hyper,
                              const ContextModel& model, const Shape3& shape,
                              const std::vector<bool>& skip,
                              GmmParamTensor* trace) {
  CheckSkip(shape, skip);
  if (shape.channels != model.conv.in_channels() ||
      shape.channels != model.entropy.latent_channels()) {
    throw Error(ErrorCode::kShapeError,
                "latent shape " + shape.ToString() +
                    " does not match the context model");
  }
  if (hyper.height() != shape.height || hyper.width() != shape.width ||
      hyper.channels() != model.entropy.hyper_channels()) {
    throw Error(ErrorCode::kShapeError,
                "hyper features " + hyper.shape().ToString() +
                    " misaligned with latents " + shape.ToString());
  }
  LatentTensor out(shape);
  if (trace != nullptr) *trace = GmmParamTensor(shape);
  std::vector<double> hyp(hyper.channels());
  for (size_t y = 0; y < shape.height; ++y) {
    for (size_t x = 0; x < shape.width; ++x) {
      const ContextWindow window = ExtractWindow(out, y, x);
      const std::vector<double> ctx = MaskedConvAt(window, model.conv);
      for (size_t c = 0; c < hyp.size(); ++c) hyp[c] = hyper.at(c, y, x);
      const std::vector<GmmParams> params =
          EntropyParamsAt(ctx, hyp, model.entropy);
      for (size_t c = 0; c < shape.channels; ++c) {
        if (trace != nullptr) trace->at(c, y, x) = params[c];
        if (skip[c]) continue;
        out.at(c, y, x) =
            decoder->Decode(QuantizeCdf(ComputePmfTable(params[c])));
      }
    }
  }
  return out;
}

}  // namespace

LatentTensor SerialDecode(RangeDecoder& decoder, const RealTensor& hyper,
                          const ContextModel& model, const Shape3& shape,
                          const std::vector<bool>& skip, GmmParamTensor* trace) {
  return SerialDecodeImpl(&decoder, hyper, model, shape, skip, trace);
}

LatentTensor SerialDecode(const Bitstream& stream, const RealTensor& hyper,
                          const ContextModel& model, const Shape3& shape,
                          const std::vector<bool>& skip, GmmParamTensor* trace) {
  CheckSkip(shape, skip);
  if (CountCoded(shape, skip) == 0) {
    if (!stream.bytes.empty()) {
      throw Error(ErrorCode::kDecodeError,
                  "payload present but every channel is skipped");
    }
    return SerialDecodeImpl(nullptr, hyper, model, shape, skip, trace);
  }
  RangeDecoder decoder(stream.bytes);
  LatentTensor out = SerialDecodeImpl(&decoder, hyper, model, shape, skip, trace);
  decoder.Finish();
  return out;
}

}  // namespace gmmc
