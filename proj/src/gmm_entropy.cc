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

#include "gmmc/gmm_entropy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gmmc {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// A CDF evaluation point kept as the smaller of its two tails, so that mass
// between two points in the same tail does not cancel catastrophically.
struct TailPoint {
  double z;     // standardized coordinate, may be +-infinity at the edges
  double tail;  // Phi(z) when z < 0, 1 - Phi(z) otherwise
};

TailPoint MakeTailPoint(double z) {
  if (z < 0) return {z, 0.5 * std::erfc(-z * kInvSqrt2)};
  return {z, 0.5 * std::erfc(z * kInvSqrt2)};
}

double MassBetween(const TailPoint& a, const TailPoint& b) {
  double m;
  if (b.z < 0) {
    m = b.tail - a.tail;
  } else if (a.z >= 0) {
    m = a.tail - b.tail;
  } else {
    m = 1.0 - a.tail - b.tail;
  }
  return std::max(m, 0.0);
}

double LowerBoundary(int32_t symbol) {
  return symbol == SymbolAlphabet::kLo
             ? -std::numeric_limits<double>::infinity()
             : symbol - 0.5;
}

double UpperBoundary(int32_t symbol) {
  return symbol == SymbolAlphabet::kHi
             ? std::numeric_limits<double>::infinity()
             : symbol + 0.5;
}

}  // namespace

GmmParams GmmParams::Create(std::span<const double> weights,
                            std::span<const double> means,
                            std::span<const double> scales) {
  const size_t k = weights.size();
  if (k == 0 || k > kMaxMixtures) {
    throw Error(ErrorCode::kInvalidInput,
                "mixture count must be in [1, " +
                    std::to_string(kMaxMixtures) + "], got " +
                    std::to_string(k));
  }
  if (means.size() != k || scales.size() != k) {
    throw Error(ErrorCode::kInvalidInput,
                "weights, means and scales must have equal length");
  }
  GmmParams p;
  p.k_ = k;
  double sum = 0;
  for (size_t i = 0; i < k; ++i) {
    if (!std::isfinite(weights[i]) || !std::isfinite(means[i]) ||
        !std::isfinite(scales[i])) {
      throw Error(ErrorCode::kInvalidInput, "non-finite mixture parameter");
    }
    if (weights[i] < 0) {
      throw Error(ErrorCode::kInvalidInput, "negative mixture weight");
    }
    p.weights_[i] = weights[i];
    p.means_[i] = means[i];
    p.scales_[i] = std::max(scales[i], kSigmaFloor);
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidInput,
                "mixture weights must sum to 1, got " + std::to_string(sum));
  }
  return p;
}

GmmParams GmmParams::Gaussian(double mean, double scale) {
  const double w = 1.0;
  return Create({&w, 1}, {&mean, 1}, {&scale, 1});
}

int32_t QuantizeValue(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidInput, "non-finite latent value");
  }
  const double r = std::round(v);
  return static_cast<int32_t>(std::clamp(
      r, static_cast<double>(SymbolAlphabet::kLo),
      static_cast<double>(SymbolAlphabet::kHi)));
}

LatentTensor QuantizeLatent(const RealTensor& y) {
  LatentTensor out(y.shape());
  for (size_t i = 0; i < y.size(); ++i) {
    out.data()[i] = QuantizeValue(y.data()[i]);
  }
  return out;
}

double StdNormalCdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double DiscretizedPmf(int32_t symbol, const GmmParams& params) {
  if (!SymbolAlphabet::Contains(symbol)) {
    throw Error(ErrorCode::kInvalidSymbol,
                "symbol " + std::to_string(symbol) + " outside [-255, 256]");
  }
  const double lo = LowerBoundary(symbol);
  const double hi = UpperBoundary(symbol);
  double p = 0;
  for (size_t k = 0; k < params.k(); ++k) {
    const double w = params.weight(k);
    if (w == 0) continue;
    const double mu = params.mean(k);
    const double inv_sigma = 1.0 / params.scale(k);
    p += w * MassBetween(MakeTailPoint((lo - mu) * inv_sigma),
                         MakeTailPoint((hi - mu) * inv_sigma));
  }
  return std::min(p, 1.0);
}

PmfTable ComputePmfTable(const GmmParams& params) {
  PmfTable table{};
  // boundary[j] separates symbol j-1 from symbol j; 0 and kSize are the
  // infinite edges.
  std::array<TailPoint, SymbolAlphabet::kSize + 1> boundary;
  for (size_t k = 0; k < params.k(); ++k) {
    const double w = params.weight(k);
    if (w == 0) continue;
    const double mu = params.mean(k);
    const double inv_sigma = 1.0 / params.scale(k);
    boundary[0] = MakeTailPoint(-std::numeric_limits<double>::infinity());
    boundary[SymbolAlphabet::kSize] =
        MakeTailPoint(std::numeric_limits<double>::infinity());
    for (size_t j = 1; j < SymbolAlphabet::kSize; ++j) {
      const double edge = SymbolAlphabet::SymbolAt(j) - 0.5;
      boundary[j] = MakeTailPoint((edge - mu) * inv_sigma);
    }
    for (size_t j = 0; j < SymbolAlphabet::kSize; ++j) {
      table[j] += w * MassBetween(boundary[j], boundary[j + 1]);
    }
  }
  for (double& v : table) v = std::min(v, 1.0);
  return table;
}

double EstimateRateBits(const LatentTensor& latents,
                        const GmmParamTensor& params) {
  RequireShape(params.shape(), latents.shape(), "EstimateRateBits params");
  double bits = 0;
  for (size_t i = 0; i < latents.size(); ++i) {
    const double p = DiscretizedPmf(latents.data()[i], params.data()[i]);
    bits -= std::log2(std::max(p, kMinPmf));
  }
  return bits;
}

}  // namespace gmmc
