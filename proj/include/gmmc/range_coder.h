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

// Integer range coder over the 512-symbol latent alphabet.
//
// State is a 64-bit (low, range) pair renormalized a byte at a time, with
// carries propagated back into already-emitted bytes. Frequencies use 16-bit
// precision. Only integer arithmetic touches the coder state, so streams are
// byte-identical on every platform.

#ifndef GMMC_RANGE_CODER_H_
#define GMMC_RANGE_CODER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gmmc/gmm_entropy.h"

namespace gmmc {

class QuantizedCdf {
 public:
  static constexpr uint32_t kPrecisionBits = 16;
  static constexpr uint32_t kTotal = 1u << kPrecisionBits;

  // Every symbol gets 1 + floor(p * (kTotal - 512)) counts; the remainder
  // goes to the most probable symbol (lowest index on ties). Throws
  // kInvalidDistribution for negative, non-finite or all-zero input and for
  // sums further than 1e-6 from one.
  static QuantizedCdf FromPmf(std::span<const double> pmf);

  uint32_t freq(size_t index) const { return cum_[index + 1] - cum_[index]; }
  uint32_t cum(size_t index) const { return cum_[index]; }

  // Index j with cum(j) <= target < cum(j + 1); target must be < kTotal.
  size_t Lookup(uint32_t target) const;

  // -log2(freq / kTotal) for the given symbol.
  double CostBits(int32_t symbol) const;

  const std::array<uint32_t, SymbolAlphabet::kSize + 1>& cumulative() const {
    return cum_;
  }

 private:
  std::array<uint32_t, SymbolAlphabet::kSize + 1> cum_{};
};

inline QuantizedCdf QuantizeCdf(const PmfTable& pmf) {
  return QuantizedCdf::FromPmf(pmf);
}

struct Bitstream {
  std::vector<uint8_t> bytes;
  uint64_t bit_length = 0;
};

class RangeEncoder {
 public:
  RangeEncoder() = default;

  // Throws kInvalidSymbol for symbols outside the alphabet.
  void Encode(int32_t symbol, const QuantizedCdf& cdf);

  // Terminates the stream with a single byte; the encoder is spent after.
  Bitstream Finish();

  size_t symbols_encoded() const { return count_; }

 private:
  void PropagateCarry();

  std::vector<uint8_t> out_;
  uint64_t low_ = 0;
  uint64_t range_ = ~uint64_t{0};
  size_t count_ = 0;
};

class RangeDecoder {
 public:
  // The decoder reads up to 8 bytes past the end of the payload; those read
  // as zero.
  explicit RangeDecoder(std::span<const uint8_t> bytes);

  int32_t Decode(const QuantizedCdf& cdf);

  // Verifies that the stream was consumed exactly: throws kTruncatedStream
  // when the renormalizations needed bytes the payload does not have, and
  // kDecodeError on trailing bytes.
  void Finish() const;

 private:
  uint8_t NextByte();

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
  uint64_t code_ = 0;
  uint64_t range_ = ~uint64_t{0};
};

// Supplies the distribution for position `index`; `previous` holds every
// symbol already coded in this sequence.
using CdfProvider =
    std::function<QuantizedCdf(size_t index, std::span<const int32_t> previous)>;

Bitstream EncodeSymbols(std::span<const int32_t> symbols,
                        const CdfProvider& provider);

std::vector<int32_t> DecodeSymbols(const Bitstream& stream,
                                   const CdfProvider& provider, size_t n);

}  // namespace gmmc

#endif  // GMMC_RANGE_CODER_H_
