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

#include "gmmc/toy_model.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

#include "gmmc/codec.h"
#include "gmmc/context_model.h"
#include "gmmc/error.h"

namespace gmmc {
namespace {

// Platform-independent uniform draws: std distributions are not.
class Uniform {
 public:
  explicit Uniform(uint64_t seed) : gen_(seed) {}
  double operator()(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 gen_;
};

NamedTensor Tensor(std::string name, std::vector<uint32_t> dims,
                   const std::vector<double>& values) {
  return {std::move(name), std::move(dims),
          std::vector<float>(values.begin(), values.end())};
}

double InverseSoftplus(double y) { return y + std::log(-std::expm1(-y)); }

std::vector<double> MakeBasis(size_t rows) {
  constexpr size_t kB = kBlockSize;
  const double color[3][3] = {
      {1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0)},
      {1 / std::sqrt(2.0), 0, -1 / std::sqrt(2.0)},
      {1 / std::sqrt(6.0), -2 / std::sqrt(6.0), 1 / std::sqrt(6.0)},
  };
  auto dct = [](size_t u, size_t r) {
    const double a = u == 0 ? std::sqrt(1.0 / kB) : std::sqrt(2.0 / kB);
    return a * std::cos(std::numbers::pi * (2.0 * r + 1.0) * u / (2.0 * kB));
  };
  // (score, color, u, v)
  std::vector<std::tuple<size_t, size_t, size_t, size_t>> order;
  for (size_t t = 0; t < 3; ++t) {
    for (size_t u = 0; u < kB; ++u) {
      for (size_t v = 0; v < kB; ++v) {
        const size_t score = t == 0 ? u + v : 2 * (u + v) + 4;
        order.emplace_back(score, t, u, v);
      }
    }
  }
  std::sort(order.begin(), order.end());
  std::vector<double> basis(rows * kBlockDim);
  for (size_t n = 0; n < rows; ++n) {
    const auto [score, t, u, v] = order[n];
    for (size_t c = 0; c < 3; ++c) {
      for (size_t r = 0; r < kB; ++r) {
        for (size_t col = 0; col < kB; ++col) {
          basis[n * kBlockDim + (c * kB + r) * kB + col] =
              color[t][c] * dct(u, r) * dct(v, col);
        }
      }
    }
  }
  return basis;
}

}  // namespace

ModelFile MakeToyModel(const ToyModelConfig& cfg) {
  const size_t k = cfg.mixtures;
  const size_t n = cfg.latent_channels;
  const size_t nz = cfg.hyper_latent_channels;
  const size_t cc = cfg.context_channels;
  const size_t ch = cfg.hyper_feature_channels;
  const size_t hd = cfg.hidden;
  if (n == 0 || n > kBlockDim || k == 0 || k > kMaxMixtures || nz == 0 ||
      cc < 4 || hd < 8 + ch || n < 4) {
    throw Error(ErrorCode::kInvalidInput, "unsupported toy model config");
  }
  Uniform rnd(cfg.seed);
  ModelFile file;
  file.Add(Tensor("config", {3}, {double(k), double(n), double(nz)}));
  file.Add(Tensor("analysis.basis", {uint32_t(n), uint32_t(kBlockDim)},
                  MakeBasis(n)));
  file.Add(Tensor("analysis.offset", {1}, {cfg.offset}));

  // z_j averages |y| over its channel group.
  std::vector<double> ha(nz * n, 0.0);
  for (size_t c = 0; c < n; ++c) {
    const size_t j = c * nz / n;
    ha[j * n + c] = 2.0 * nz / n;
  }
  file.Add(Tensor("hyper.analysis", {uint32_t(nz), uint32_t(n)}, ha));
  file.Add(Tensor("hyper.prior_mean", {uint32_t(nz)},
                  std::vector<double>(nz, 0.5)));
  file.Add(Tensor("hyper.prior_scale", {uint32_t(nz)},
                  std::vector<double>(nz, 1.5)));

  std::vector<double> hs_w(ch * nz, 0.0), hs_b(ch, 0.0);
  for (size_t f = 0; f < ch; ++f) hs_w[f * nz + f * nz / ch] = 0.5;
  file.Add(Tensor("hyper.synthesis.weight", {uint32_t(ch), uint32_t(nz)}, hs_w));
  file.Add(Tensor("hyper.synthesis.bias", {uint32_t(ch)}, hs_b));

  // Context features 0..3 average the left and upper neighbors of channels
  // 0..3; the rest are weak random causal mixes.
  constexpr size_t kk = kContextKernel;
  std::vector<double> kernel(cc * n * kk * kk, 0.0), cbias(cc, 0.0);
  auto tap = [&](size_t o, size_t i, size_t r, size_t c) -> double& {
    return kernel[((o * n + i) * kk + r) * kk + c];
  };
  for (size_t f = 0; f < 4; ++f) {
    tap(f, f, 2, 1) = 0.5;
    tap(f, f, 1, 2) = 0.5;
  }
  for (size_t f = 4; f < cc; ++f) {
    for (size_t i = 0; i < n; ++i) {
      for (size_t r = 0; r < kk; ++r) {
        for (size_t c = 0; c < kk; ++c) {
          if (IsCausalTap(r, c)) tap(f, i, r, c) = rnd(-0.02, 0.02);
        }
      }
    }
  }
  file.Add(Tensor("context.kernel",
                  {uint32_t(cc), uint32_t(n), uint32_t(kk), uint32_t(kk)},
                  kernel));
  file.Add(Tensor("context.bias", {uint32_t(cc)}, cbias));

  // Hidden units: signed halves of the four predictions, rectified hyper
  // features, then random mixes.
  const size_t in = cc + ch;
  std::vector<double> w1(hd * in, 0.0), b1(hd, 0.0);
  for (size_t f = 0; f < 4; ++f) {
    w1[(2 * f) * in + f] = 1.0;
    w1[(2 * f + 1) * in + f] = -1.0;
  }
  for (size_t j = 0; j < ch; ++j) w1[(8 + j) * in + cc + j] = 1.0;
  for (size_t h = 8 + ch; h < hd; ++h) {
    for (size_t i = 0; i < in; ++i) w1[h * in + i] = rnd(-0.05, 0.05);
  }
  file.Add(Tensor("entropy.w1", {uint32_t(hd), uint32_t(in)}, w1));
  file.Add(Tensor("entropy.b1", {uint32_t(hd)}, b1));

  const size_t out = 3 * k * n;
  std::vector<double> w2(out * hd, 0.0), b2(out, 0.0);
  for (size_t c = 0; c < n; ++c) {
    const double sigma = 0.15 + 2.5 * std::exp(-static_cast<double>(c) / 12.0);
    const size_t hyper_unit = 8 + c * ch / n;
    for (size_t m = 0; m < k; ++m) {
      const double centered = static_cast<double>(m) - 0.5 * (k - 1);
      const size_t logit = (3 * c + 0) * k + m;
      const size_t mean = (3 * c + 1) * k + m;
      const size_t scale = (3 * c + 2) * k + m;
      b2[logit] = -0.3 * static_cast<double>(m);
      b2[mean] = 0.5 * centered;
      b2[scale] = InverseSoftplus(sigma * std::exp(0.7 * centered));
      if (c < 4) {
        w2[mean * hd + 2 * c] = 0.9;
        w2[mean * hd + 2 * c + 1] = -0.9;
      }
      w2[scale * hd + hyper_unit] = 0.4;
      for (size_t h = 8 + ch; h < hd; ++h) {
        w2[logit * hd + h] = rnd(-0.01, 0.01);
        w2[mean * hd + h] = rnd(-0.01, 0.01);
        w2[scale * hd + h] = rnd(-0.01, 0.01);
      }
    }
  }
  file.Add(Tensor("entropy.w2", {uint32_t(out), uint32_t(hd)}, w2));
  file.Add(Tensor("entropy.b2", {uint32_t(out)}, b2));
  return file;
}

}  // namespace gmmc
