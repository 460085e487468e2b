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

// Autoregressive context model and entropy-parameter network.
//
// The context model is a 5x5 convolution masked to be spatially causal in
// raster order: only the two rows above the center and the two taps to its
// left contribute. All channels at one spatial position share a context, so
// the decoder resolves positions in raster order and every channel of a
// position at once.
//
// Dot products accumulate bias first, then kernel row, kernel column and
// input channel (innermost), in 64-bit floating point. The encoder's
// full-tensor pass and the decoder's per-window pass follow the same order
// and therefore produce bit-identical mixture parameters.

#ifndef GMMC_CONTEXT_MODEL_H_
#define GMMC_CONTEXT_MODEL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "gmmc/gmm_entropy.h"
#include "gmmc/range_coder.h"
#include "gmmc/tensor.h"

namespace gmmc {

inline constexpr size_t kContextKernel = 5;
inline constexpr size_t kContextRadius = 2;

// True for the 12 taps that precede the window center in raster order.
constexpr bool IsCausalTap(size_t row, size_t col) {
  return row < kContextRadius || (row == kContextRadius && col < kContextRadius);
}

class MaskedConvWeights {
 public:
  MaskedConvWeights() = default;
  // kernel is [out, in, 5, 5] row-major. Taps at and after the center are
  // zeroed.
  MaskedConvWeights(size_t out_channels, size_t in_channels,
                    std::vector<double> kernel, std::vector<double> bias);

  size_t out_channels() const { return out_channels_; }
  size_t in_channels() const { return in_channels_; }
  double kernel(size_t o, size_t i, size_t r, size_t c) const {
    return kernel_[((o * in_channels_ + i) * kContextKernel + r) *
                       kContextKernel + c];
  }
  double bias(size_t o) const { return bias_[o]; }

 private:
  size_t out_channels_ = 0;
  size_t in_channels_ = 0;
  std::vector<double> kernel_;
  std::vector<double> bias_;
};

// Two 1x1 layers with a ReLU between them, mapping (context, hyper) features
// to 3*K*N outputs. For latent channel n and mixture k, output
// (3n + 0)K + k is the weight logit, (3n + 1)K + k the mean and
// (3n + 2)K + k the raw scale.
class EntropyParamWeights {
 public:
  EntropyParamWeights() = default;
  EntropyParamWeights(size_t mixtures, size_t latent_channels,
                      size_t context_channels, size_t hyper_channels,
                      size_t hidden, std::vector<double> w1,
                      std::vector<double> b1, std::vector<double> w2,
                      std::vector<double> b2);

  size_t mixtures() const { return mixtures_; }
  size_t latent_channels() const { return latent_channels_; }
  size_t context_channels() const { return context_channels_; }
  size_t hyper_channels() const { return hyper_channels_; }
  size_t hidden() const { return hidden_; }
  size_t input_width() const { return context_channels_ + hyper_channels_; }
  size_t output_width() const { return 3 * mixtures_ * latent_channels_; }

  const std::vector<double>& w1() const { return w1_; }
  const std::vector<double>& b1() const { return b1_; }
  const std::vector<double>& w2() const { return w2_; }
  const std::vector<double>& b2() const { return b2_; }

 private:
  size_t mixtures_ = 0;
  size_t latent_channels_ = 0;
  size_t context_channels_ = 0;
  size_t hyper_channels_ = 0;
  size_t hidden_ = 0;
  std::vector<double> w1_, b1_, w2_, b2_;
};

struct ContextModel {
  MaskedConvWeights conv;
  EntropyParamWeights entropy;
};

// Zero-padded [channels, 5, 5] patch of latents centered on one position.
class ContextWindow {
 public:
  explicit ContextWindow(size_t channels)
      : channels_(channels),
        values_(channels * kContextKernel * kContextKernel, 0.0) {}

  size_t channels() const { return channels_; }
  double at(size_t c, size_t r, size_t col) const {
    return values_[(c * kContextKernel + r) * kContextKernel + col];
  }
  double& at(size_t c, size_t r, size_t col) {
    return values_[(c * kContextKernel + r) * kContextKernel + col];
  }

 private:
  size_t channels_;
  std::vector<double> values_;
};

double Softplus(double x);
// Max-shifted softmax; out.size() must equal logits.size().
void Softmax(std::span<const double> logits, std::span<double> out);

// Throws kIndexError if (row, col) is outside the latent grid.
ContextWindow ExtractWindow(const LatentTensor& partial, size_t row, size_t col);

// Context features at the window center.
std::vector<double> MaskedConvAt(const ContextWindow& window,
                                 const MaskedConvWeights& w);

RealTensor MaskedConvForward(const LatentTensor& latents,
                             const MaskedConvWeights& w);

// Mixture parameters for every latent channel at one position.
std::vector<GmmParams> EntropyParamsAt(std::span<const double> context,
                                       std::span<const double> hyper,
                                       const EntropyParamWeights& w);

GmmParamTensor EntropyParams(const RealTensor& context, const RealTensor& hyper,
                             const EntropyParamWeights& w);

// Encoder-side evaluation over the whole tensor.
GmmParamTensor ForwardParams(const LatentTensor& latents,
                             const RealTensor& hyper, const ContextModel& model);

// Codes the latents in decode order (raster positions, then channels),
// omitting channels whose skip flag is set. Returns the number of symbols
// written and adds their cost under the quantized tables to
// `quantized_bits` when non-null. Likelihood tables are built on `threads`
// workers.
size_t EncodeLatents(const LatentTensor& latents, const GmmParamTensor& params,
                     const std::vector<bool>& skip, RangeEncoder& encoder,
                     size_t threads = 1, double* quantized_bits = nullptr);

// Sequential decode feeding only the causal 5x5 window of each position to
// the context model. Skipped channels are written as zero without touching
// the coder. If `trace` is non-null it receives the parameters used at every
// element.
LatentTensor SerialDecode(RangeDecoder& decoder, const RealTensor& hyper,
                          const ContextModel& model, const Shape3& shape,
                          const std::vector<bool>& skip,
                          GmmParamTensor* trace = nullptr);

LatentTensor SerialDecode(const Bitstream& stream, const RealTensor& hyper,
                          const ContextModel& model, const Shape3& shape,
                          const std::vector<bool>& skip,
                          GmmParamTensor* trace = nullptr);

}  // namespace gmmc

#endif  // GMMC_CONTEXT_MODEL_H_
