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

// Discretized Gaussian mixture likelihoods over the clipped latent alphabet.
//
// Each latent symbol s gets the probability mass the mixture assigns to
// [s - 1/2, s + 1/2). The first symbol absorbs the whole lower tail and the
// last one the whole upper tail, so a table over the alphabet always sums
// to one.

#ifndef GMMC_GMM_ENTROPY_H_
#define GMMC_GMM_ENTROPY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "gmmc/tensor.h"

namespace gmmc {

struct SymbolAlphabet {
  static constexpr int32_t kLo = -255;
  static constexpr int32_t kHi = 256;
  static constexpr size_t kSize = 512;

  static constexpr bool Contains(int64_t s) { return s >= kLo && s <= kHi; }
  static constexpr size_t IndexOf(int32_t s) {
    return static_cast<size_t>(s - kLo);
  }
  static constexpr int32_t SymbolAt(size_t index) {
    return static_cast<int32_t>(index) + kLo;
  }
};
static_assert(SymbolAlphabet::kHi - SymbolAlphabet::kLo + 1 ==
              static_cast<int32_t>(SymbolAlphabet::kSize));

inline constexpr double kSigmaFloor = 0.01;
// 2^-40: floor applied to probabilities before taking logarithms.
inline constexpr double kMinPmf = 9.094947017729282e-13;
inline constexpr size_t kMaxMixtures = 8;

using PmfTable = std::array<double, SymbolAlphabet::kSize>;

// Mixture parameters for one latent element. Weights are post-softmax and
// scales are clamped to kSigmaFloor on construction.
class GmmParams {
 public:
  GmmParams() = default;

  // Throws kInvalidInput if the sizes disagree, k is outside
  // [1, kMaxMixtures], any value is non-finite, a weight is negative, or the
  // weights do not sum to 1 within 1e-9.
  static GmmParams Create(std::span<const double> weights,
                          std::span<const double> means,
                          std::span<const double> scales);

  static GmmParams Gaussian(double mean, double scale);

  size_t k() const { return k_; }
  double weight(size_t i) const { return weights_[i]; }
  double mean(size_t i) const { return means_[i]; }
  double scale(size_t i) const { return scales_[i]; }

  bool operator==(const GmmParams&) const = default;

 private:
  size_t k_ = 0;
  std::array<double, kMaxMixtures> weights_{};
  std::array<double, kMaxMixtures> means_{};
  std::array<double, kMaxMixtures> scales_{};
};

using GmmParamTensor = Tensor3<GmmParams>;

// Rounds half away from zero and clips to the alphabet.
LatentTensor QuantizeLatent(const RealTensor& y);
int32_t QuantizeValue(double v);

// Standard normal CDF via erfc; symmetric to within 1e-16.
double StdNormalCdf(double x);

double DiscretizedPmf(int32_t symbol, const GmmParams& params);

PmfTable ComputePmfTable(const GmmParams& params);

// Sum of -log2(max(pmf, kMinPmf)) over all elements.
double EstimateRateBits(const LatentTensor& latents,
                        const GmmParamTensor& params);

}  // namespace gmmc

#endif  // GMMC_GMM_ENTROPY_H_
