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

#include "swbcodec/audio.h"

#include <cmath>

#include "swbcodec/error.h"

namespace swbcodec {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kWeightsIncompatible: return "weights-incompatible";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kFingerprintMismatch: return "fingerprint-mismatch";
    case ErrorCode::kUnsupportedVersion: return "unsupported-version";
    case ErrorCode::kBlobSize: return "blob-size";
    case ErrorCode::kCorruptFrame: return "corrupt-frame";
    case ErrorCode::kFraming: return "framing";
    case ErrorCode::kPoisonedLoss: return "poisoned-loss";
    case ErrorCode::kCongruence: return "congruence";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

double Energy(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double Rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::sqrt(Energy(x) / static_cast<double>(x.size()));
}

double PowerToDb(double power) {
  if (power <= 1e-20) return -200.0;
  return 10.0 * std::log10(power);
}

}  // namespace swbcodec
