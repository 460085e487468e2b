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

#include "gmmc/range_coder.h"

#include <cmath>
#include <random>
#include <vector>

#include "gmmc/error.h"
#include "gmmc/gmm_entropy.h"
#include "gtest/gtest.h"

namespace gmmc {
namespace {

double CrossEntropyBits(const std::vector<int32_t>& symbols,
                        const CdfProvider& provider) {
  double bits = 0;
  for (size_t i = 0; i < symbols.size(); ++i) {
    const QuantizedCdf cdf =
        provider(i, std::span<const int32_t>(symbols.data(), i));
    const uint32_t f = cdf.freq(SymbolAlphabet::IndexOf(symbols[i]));
    bits += 16.0 - std::log2(static_cast<double>(f));
  }
  return bits;
}

QuantizedCdf TwoSymbolCdf() {
  PmfTable pmf{};
  pmf[SymbolAlphabet::IndexOf(0)] = 0.5;
  pmf[SymbolAlphabet::IndexOf(1)] = 0.5;
  return QuantizeCdf(pmf);
}

TEST(QuantizeCdfTest, Uniform) {
  PmfTable pmf;
  pmf.fill(1.0 / 512);
  const QuantizedCdf cdf = QuantizeCdf(pmf);
  for (size_t j = 0; j < 512; ++j) EXPECT_EQ(cdf.freq(j), 128u);
}

TEST(QuantizeCdfTest, NearlyDeterministic) {
  PmfTable pmf;
  pmf.fill(1e-15);
  pmf[300] = 1.0 - 511e-15;
  const QuantizedCdf cdf = QuantizeCdf(pmf);
  for (size_t j = 0; j < 512; ++j) {
    EXPECT_EQ(cdf.freq(j), j == 300 ? 65536u - 511u : 1u);
  }
}

TEST(QuantizeCdfTest, TotalsAndFloor) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const PmfTable pmf = ComputePmfTable(GmmParams::Gaussian(u(rng), 0.02 + std::abs(u(rng))));
    const QuantizedCdf cdf = QuantizeCdf(pmf);
    EXPECT_EQ(cdf.cum(0), 0u);
    EXPECT_EQ(cdf.cumulative().back(), QuantizedCdf::kTotal);
    for (size_t j = 0; j < 512; ++j) EXPECT_GE(cdf.freq(j), 1u);
  }
}

TEST(QuantizeCdfTest, RejectsZeroPmf) {
  PmfTable pmf{};
  try {
    QuantizeCdf(pmf);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidDistribution);
  }
}

TEST(QuantizeCdfTest, LookupInvertsCumulative) {
  const QuantizedCdf cdf = QuantizeCdf(ComputePmfTable(GmmParams::Gaussian(2, 5)));
  for (uint32_t t = 0; t < QuantizedCdf::kTotal; t += 7) {
    const size_t j = cdf.Lookup(t);
    EXPECT_LE(cdf.cum(j), t);
    EXPECT_LT(t, cdf.cum(j + 1));
  }
}

TEST(RangeCoderTest, EmptyStream) {
  const CdfProvider provider = [](size_t, std::span<const int32_t>) {
    return TwoSymbolCdf();
  };
  const Bitstream s = EncodeSymbols({}, provider);
  EXPECT_LE(s.bytes.size(), 8u);
  EXPECT_TRUE(DecodeSymbols(s, provider, 0).empty());
}

TEST(RangeCoderTest, HalfProbabilitySymbols) {
  const QuantizedCdf cdf = TwoSymbolCdf();
  const CdfProvider provider = [&](size_t, std::span<const int32_t>) {
    return cdf;
  };
  std::mt19937_64 rng(1);
  std::vector<int32_t> symbols(1000);
  for (int32_t& s : symbols) s = static_cast<int32_t>(rng() & 1);
  const Bitstream s = EncodeSymbols(symbols, provider);
  EXPECT_GE(s.bytes.size(), 125u);
  EXPECT_LE(s.bytes.size(), 134u);
  EXPECT_EQ(DecodeSymbols(s, provider, symbols.size()), symbols);
}

TEST(RangeCoderTest, AdaptiveRoundtripAndRateBound) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const size_t n = 1 + rng() % 5000;
    // Mean follows the previous symbol, so the decoder must feed back
    // exactly what it decoded.
    const CdfProvider provider = [](size_t i, std::span<const int32_t> prev) {
      const double mu = prev.empty() ? 0.0 : 0.8 * prev.back();
      return QuantizeCdf(ComputePmfTable(GmmParams::Gaussian(mu, 0.3 + (i % 7))));
    };
    std::vector<int32_t> symbols;
    std::normal_distribution<double> noise(0, 3);
    for (size_t i = 0; i < n; ++i) {
      const double mu = symbols.empty() ? 0.0 : 0.8 * symbols.back();
      symbols.push_back(QuantizeValue(mu + noise(rng) * (1 + i % 7) / 3.0));
    }
    const Bitstream s = EncodeSymbols(symbols, provider);
    EXPECT_EQ(s.bit_length, 8 * s.bytes.size());
    EXPECT_LE(static_cast<double>(s.bit_length),
              CrossEntropyBits(symbols, provider) + 64);
    EXPECT_EQ(DecodeSymbols(s, provider, n), symbols);
  }
}

TEST(RangeCoderTest, ExtremeSymbols) {
  const QuantizedCdf cdf = QuantizeCdf(ComputePmfTable(GmmParams::Gaussian(0, 0.01)));
  const CdfProvider provider = [&](size_t, std::span<const int32_t>) {
    return cdf;
  };
  // Frequency-one symbols at both alphabet edges force long renormalizations.
  std::vector<int32_t> symbols = {-255, 256, 0, 256, -255, 0, 0, 17, -255};
  for (int i = 0; i < 2000; ++i) symbols.push_back(i % 3 ? 0 : 256);
  const Bitstream s = EncodeSymbols(symbols, provider);
  EXPECT_EQ(DecodeSymbols(s, provider, symbols.size()), symbols);
}

TEST(RangeCoderTest, RejectsOutOfAlphabet) {
  RangeEncoder enc;
  try {
    enc.Encode(400, TwoSymbolCdf());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSymbol);
  }
}

TEST(RangeCoderTest, TruncatedStream) {
  const QuantizedCdf cdf = QuantizeCdf(ComputePmfTable(GmmParams::Gaussian(0, 20)));
  const CdfProvider provider = [&](size_t, std::span<const int32_t>) {
    return cdf;
  };
  std::mt19937_64 rng(9);
  std::vector<int32_t> symbols(500);
  for (int32_t& s : symbols) s = static_cast<int32_t>(rng() % 41) - 20;
  Bitstream s = EncodeSymbols(symbols, provider);
  ASSERT_GT(s.bytes.size(), 20u);
  s.bytes.resize(s.bytes.size() / 2);
  s.bit_length = 8 * s.bytes.size();
  try {
    DecodeSymbols(s, provider, symbols.size());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncatedStream);
  }
}

}  // namespace
}  // namespace gmmc
