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

#ifndef SWBCODEC_WEIGHTS_IO_H_
#define SWBCODEC_WEIGHTS_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "swbcodec/nn.h"

namespace swbcodec::nn {

inline constexpr char kWeightsMagic[4] = {'P', 'G', 'W', 'T'};
inline constexpr std::uint16_t kWeightsVersion = 1;

// Layout (all little-endian): "PGWT", u16 version, u64 fingerprint,
// u32 blob count, then per blob u32 layer index, u32 byte length and
// byte-length/4 IEEE-754 binary32 values.
std::vector<std::uint8_t> SerializeWeights(const ModelWeights& weights);
// Errors: kBadMagic, kUnsupportedVersion, kTruncated, kBlobSize, kFormat.
ModelWeights ParseWeights(std::span<const std::uint8_t> bytes);

void save_weights(const ModelWeights& weights, const std::filesystem::path& path);
ModelWeights load_weights(const std::filesystem::path& path);

// load_weights plus a kFingerprintMismatch check against `arch` and a
// per-layer blob size check.
ModelWeights LoadWeightsFor(const std::filesystem::path& path,
                            const ModelArchitecture& arch);

}  // namespace swbcodec::nn

#endif  // SWBCODEC_WEIGHTS_IO_H_
