// Copyright 2026 The swbcodec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWBCODEC_ERROR_H_
#define SWBCODEC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace swbcodec {

enum class ErrorCode {
  kInvalidArgument,
  kShape,
  kConfig,
  kWeightsIncompatible,
  kBadMagic,
  kTruncated,
  kFingerprintMismatch,
  kUnsupportedVersion,
  kBlobSize,
  kCorruptFrame,
  kFraming,
  kPoisonedLoss,
  kCongruence,
  kFormat,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type; `code()`
// lets callers (the CLI in particular) map failures to exit statuses.
class CodecError : public std::runtime_error {
 public:
  CodecError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw CodecError(code, message);
}

}  // namespace swbcodec

#endif  // SWBCODEC_ERROR_H_
