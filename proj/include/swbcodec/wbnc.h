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

#ifndef SWBCODEC_WBNC_H_
#define SWBCODEC_WBNC_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "swbcodec/audio.h"
#include "swbcodec/nn.h"

namespace swbcodec {

// Uniform mid-rise scalar quantizer over (-1, 1):
// level(i) = -1 + (i + 0.5) * 2 / 2^bits.
struct SqConfig {
  int bits_per_dim = 3;
  int dims = 40;

  int levels() const { return 1 << bits_per_dim; }
  double step() const { return 2.0 / levels(); }
  double level(int index) const { return -1.0 + (index + 0.5) * step(); }
  int bits_per_frame() const { return bits_per_dim * dims; }
  int bitrate_bps() const { return bits_per_frame() * kFramesPerSecond; }
  void Validate() const;
};

struct QuantizedFrame {
  std::vector<std::uint8_t> indices;

  bool operator==(const QuantizedFrame&) const = default;
};

// Nearest level per dimension, ties to the lower index. Values outside
// [-1, 1] (or NaN) are rejected: the encoder output is tanh-bounded.
QuantizedFrame sq_quantize(std::span<const double> embedding, const SqConfig& cfg);
std::vector<double> sq_dequantize(const QuantizedFrame& frame, const SqConfig& cfg);

// Encoder half of the wideband path: 16 kHz audio -> one QuantizedFrame
// per 320 samples. Weights are shared immutably between instances.
class WbncEncoder {
 public:
  WbncEncoder(std::shared_ptr<const nn::ModelWeights> weights, SqConfig sq = {});

  std::vector<QuantizedFrame> Encode(const SampleBuffer& wideband) const;
  // Unquantized embeddings [dims x frames] plus the block-boundary taps.
  nn::ForwardResult Embed(const SampleBuffer& wideband) const;

  const nn::ModelArchitecture& architecture() const { return arch_; }
  const SqConfig& sq_config() const { return sq_; }

 private:
  nn::ModelArchitecture arch_;
  std::shared_ptr<const nn::ModelWeights> weights_;
  SqConfig sq_;
};

class WbncDecoder {
 public:
  WbncDecoder(std::shared_ptr<const nn::ModelWeights> weights, SqConfig sq = {});

  // 320 samples per frame at 16 kHz, clipped to [-1, 1]. Throws
  // kCorruptFrame on out-of-range indices.
  SampleBuffer Decode(std::span<const QuantizedFrame> frames) const;

  const nn::ModelArchitecture& architecture() const { return arch_; }

 private:
  nn::ModelArchitecture arch_;
  std::shared_ptr<const nn::ModelWeights> weights_;
  SqConfig sq_;
};

std::vector<QuantizedFrame> wbnc_encode(const SampleBuffer& wideband,
                                        const nn::ModelWeights& weights);
SampleBuffer wbnc_decode(std::span<const QuantizedFrame> frames,
                         const nn::ModelWeights& weights);

}  // namespace swbcodec

#endif  // SWBCODEC_WBNC_H_
