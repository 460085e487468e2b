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

#ifndef GMMC_ERROR_H_
#define GMMC_ERROR_H_

#include <stdexcept>
#include <string>

namespace gmmc {

enum class ErrorCode {
  kInvalidInput,
  kInvalidSymbol,
  kInvalidDistribution,
  kShapeError,
  kIndexError,
  kTruncatedStream,
  kDecodeError,
  kCorruptStream,
  kUnsupportedVersion,
  kModelMismatch,
  kResourceLimit,
  kIoError,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type; callers
// dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kInvalidSymbol: return "InvalidSymbol";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kShapeError: return "ShapeError";
    case ErrorCode::kIndexError: return "IndexError";
    case ErrorCode::kTruncatedStream: return "TruncatedStream";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kCorruptStream: return "CorruptStream";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kModelMismatch: return "ModelMismatch";
    case ErrorCode::kResourceLimit: return "ResourceLimit";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace gmmc

#endif  // GMMC_ERROR_H_
