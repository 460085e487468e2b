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

#include <algorithm>
#include <cmath>
#include <string>

namespace gmmc {
namespace {

constexpr uint64_t kTopByteShift = 56;
constexpr uint64_t kRenormThreshold = uint64_t{1} << kTopByteShift;
constexpr uint32_t kReserved = SymbolAlphabet::kSize;

size_t CheckedIndex(int32_t symbol) {
  if (!SymbolAlphabet::Contains(symbol)) {
    throw Error(ErrorCode::kInvalidSymbol,
                "symbol " + std::to_string(symbol) + " outside [-255, 256]");
  }
  return SymbolAlphabet::IndexOf(symbol);
}

}  // namespace

QuantizedCdf QuantizedCdf::FromPmf(std::span<const double> pmf) {
  if (pmf.size() != SymbolAlphabet::kSize) {
    throw Error(ErrorCode::kInvalidDistribution,
                "pmf must have 512 entries, got " + std::to_string(pmf.size()));
  }
  double sum = 0;
  for (double p : pmf) {
    if (!std::isfinite(p) || p < 0) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "pmf entries must be finite and nonnegative");
    }
    sum += p;
  }
  if (sum <= 0) {
    throw Error(ErrorCode::kInvalidDistribution, "all-zero pmf");
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidDistribution,
                "pmf sums to " + std::to_string(sum));
  }

  std::array<uint32_t, SymbolAlphabet::kSize> freq;
  constexpr double kScale = kTotal - kReserved;
  uint32_t total = 0;
  size_t argmax = 0;
  for (size_t j = 0; j < SymbolAlphabet::kSize; ++j) {
    const double p = std::min(pmf[j] / sum, 1.0);
    freq[j] = 1 + static_cast<uint32_t>(std::floor(p * kScale));
    total += freq[j];
    if (pmf[j] > pmf[argmax]) argmax = j;
  }
  // total <= kReserved + kScale == kTotal, so the correction is nonnegative.
  freq[argmax] += kTotal - total;

  QuantizedCdf cdf;
  cdf.cum_[0] = 0;
  for (size_t j = 0; j < SymbolAlphabet::kSize; ++j) {
    cdf.cum_[j + 1] = cdf.cum_[j] + freq[j];
  }
  return cdf;
}

size_t QuantizedCdf::Lookup(uint32_t target) const {
  auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  return static_cast<size_t>(it - cum_.begin()) - 1;
}

double QuantizedCdf::CostBits(int32_t symbol) const {
  const size_t j = CheckedIndex(symbol);
  return kPrecisionBits - std::log2(static_cast<double>(freq(j)));
}

void RangeEncoder::Encode(int32_t symbol, const QuantizedCdf& cdf) {
  const size_t j = CheckedIndex(symbol);
  const uint64_t r = range_ >> QuantizedCdf::kPrecisionBits;
  const uint64_t next = low_ + r * cdf.cum(j);
  if (next < low_) PropagateCarry();
  low_ = next;
  range_ = r * cdf.freq(j);
  while (range_ < kRenormThreshold) {
    out_.push_back(static_cast<uint8_t>(low_ >> kTopByteShift));
    low_ <<= 8;
    range_ <<= 8;
  }
  ++count_;
}

void RangeEncoder::PropagateCarry() {
  for (auto it = out_.rbegin(); it != out_.rend(); ++it) {
    if (++*it != 0) return;
  }
}

Bitstream RangeEncoder::Finish() {
  // Emit the top byte of the point in [low, low + range) with the most
  // trailing zero bits; range >= 2^56 guarantees one exists.
  constexpr uint64_t kMask = kRenormThreshold - 1;
  const uint64_t rounded = low_ + kMask;
  if (rounded < low_) PropagateCarry();
  out_.push_back(static_cast<uint8_t>((rounded & ~kMask) >> kTopByteShift));

  Bitstream bs;
  bs.bytes = std::move(out_);
  bs.bit_length = 8 * bs.bytes.size();
  out_.clear();
  low_ = 0;
  range_ = ~uint64_t{0};
  return bs;
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> bytes) : bytes_(bytes) {
  for (int i = 0; i < 8; ++i) code_ = (code_ << 8) | NextByte();
}

uint8_t RangeDecoder::NextByte() {
  const size_t p = pos_++;
  if (p >= 8 && p - 8 + 2 > bytes_.size()) {
    throw Error(ErrorCode::kTruncatedStream,
                "range decoder ran past the payload end");
  }
  return p < bytes_.size() ? bytes_[p] : 0;
}

int32_t RangeDecoder::Decode(const QuantizedCdf& cdf) {
  const uint64_t r = range_ >> QuantizedCdf::kPrecisionBits;
  const uint64_t target = std::min<uint64_t>(code_ / r, QuantizedCdf::kTotal - 1);
  const size_t j = cdf.Lookup(static_cast<uint32_t>(target));
  code_ -= r * cdf.cum(j);
  range_ = r * cdf.freq(j);
  while (range_ < kRenormThreshold) {
    code_ = (code_ << 8) | NextByte();
    range_ <<= 8;
  }
  return SymbolAlphabet::SymbolAt(j);
}

void RangeDecoder::Finish() const {
  const size_t renorm_bytes = pos_ - 8;
  if (renorm_bytes + 1 > bytes_.size()) {
    throw Error(ErrorCode::kTruncatedStream, "payload shorter than encoded");
  }
  if (renorm_bytes + 1 < bytes_.size()) {
    throw Error(ErrorCode::kDecodeError,
                std::to_string(bytes_.size() - renorm_bytes - 1) +
                    " unconsumed payload bytes");
  }
}

Bitstream EncodeSymbols(std::span<const int32_t> symbols,
                        const CdfProvider& provider) {
  RangeEncoder enc;
  for (size_t i = 0; i < symbols.size(); ++i) {
    enc.Encode(symbols[i], provider(i, symbols.first(i)));
  }
  return enc.Finish();
}

std::vector<int32_t> DecodeSymbols(const Bitstream& stream,
                                   const CdfProvider& provider, size_t n) {
  std::vector<int32_t> out;
  if (n == 0) return out;
  out.reserve(n);
  RangeDecoder dec(stream.bytes);
  for (size_t i = 0; i < n; ++i) {
    out.push_back(dec.Decode(provider(i, out)));
  }
  dec.Finish();
  return out;
}

}  // namespace gmmc
