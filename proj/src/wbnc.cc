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

#include "swbcodec/wbnc.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "swbcodec/architectures.h"
#include "swbcodec/error.h"

namespace swbcodec {

void SqConfig::Validate() const {
  Require(bits_per_dim >= 1 && bits_per_dim <= 8, ErrorCode::kConfig,
          "SQ bits per dimension must be in [1, 8]");
  Require(dims >= 1, ErrorCode::kConfig, "SQ needs at least one dimension");
}

QuantizedFrame sq_quantize(std::span<const double> embedding, const SqConfig& cfg) {
  cfg.Validate();
  Require(embedding.size() == static_cast<std::size_t>(cfg.dims),
          ErrorCode::kInvalidArgument,
          "embedding has " + std::to_string(embedding.size()) + " dims, expected " +
              std::to_string(cfg.dims));
  QuantizedFrame frame;
  frame.indices.reserve(embedding.size());
  const int top = cfg.levels() - 1;
  for (double v : embedding) {
    Require(v >= -1.0 && v <= 1.0, ErrorCode::kInvalidArgument,
            "SQ input " + std::to_string(v) + " outside [-1, 1]");
    // Position in level units; level i sits at u = i + 0.5, so the nearest
    // level with ties to the lower index is ceil(u) - 1.
    const double u = (v + 1.0) / cfg.step();
    const int index = std::clamp(static_cast<int>(std::ceil(u)) - 1, 0, top);
    frame.indices.push_back(static_cast<std::uint8_t>(index));
  }
  return frame;
}

std::vector<double> sq_dequantize(const QuantizedFrame& frame, const SqConfig& cfg) {
  cfg.Validate();
  Require(frame.indices.size() == static_cast<std::size_t>(cfg.dims),
          ErrorCode::kCorruptFrame,
          "frame has " + std::to_string(frame.indices.size()) + " indices");
  std::vector<double> values;
  values.reserve(frame.indices.size());
  for (std::uint8_t idx : frame.indices) {
    Require(idx < cfg.levels(), ErrorCode::kCorruptFrame,
            "SQ index " + std::to_string(idx) + " out of range");
    values.push_back(cfg.level(idx));
  }
  return values;
}

WbncEncoder::WbncEncoder(std::shared_ptr<const nn::ModelWeights> weights, SqConfig sq)
    : arch_(EncoderArchitecture(kStudentUnitsPerBlock, sq.dims)),
      weights_(std::move(weights)),
      sq_(sq) {
  sq_.Validate();
  Require(weights_ != nullptr, ErrorCode::kWeightsIncompatible, "encoder weights missing");
  nn::CheckCompatible(arch_, *weights_);
}

nn::ForwardResult WbncEncoder::Embed(const SampleBuffer& wideband) const {
  Require(wideband.sample_rate == kWidebandRate, ErrorCode::kInvalidArgument,
          "wideband encoder expects 16 kHz input");
  Require(wideband.size() % kSamplesPerEmbedding == 0, ErrorCode::kInvalidArgument,
          "encoder input length " + std::to_string(wideband.size()) +
              " is not a multiple of 320");
  nn::Tensor x({1, wideband.size()});
  std::transform(wideband.samples.begin(), wideband.samples.end(), x.data.begin(),
                 [](double v) { return static_cast<float>(v); });
  return nn::forward(arch_, *weights_, x);
}

std::vector<QuantizedFrame> WbncEncoder::Encode(const SampleBuffer& wideband) const {
  std::vector<QuantizedFrame> frames;
  if (wideband.empty()) return frames;
  const nn::Tensor emb = Embed(wideband).output;
  const std::size_t count = emb.time();
  frames.reserve(count);
  std::vector<double> column(emb.channels());
  for (std::size_t f = 0; f < count; ++f) {
    for (std::size_t d = 0; d < emb.channels(); ++d) {
      column[d] = emb.channel(d)[f];
    }
    frames.push_back(sq_quantize(column, sq_));
  }
  return frames;
}

WbncDecoder::WbncDecoder(std::shared_ptr<const nn::ModelWeights> weights, SqConfig sq)
    : arch_(DecoderArchitecture(kStudentUnitsPerBlock, sq.dims)),
      weights_(std::move(weights)),
      sq_(sq) {
  sq_.Validate();
  Require(weights_ != nullptr, ErrorCode::kWeightsIncompatible, "decoder weights missing");
  nn::CheckCompatible(arch_, *weights_);
}

SampleBuffer WbncDecoder::Decode(std::span<const QuantizedFrame> frames) const {
  Require(!frames.empty(), ErrorCode::kInvalidArgument, "no frames to decode");
  const auto dims = static_cast<std::size_t>(sq_.dims);
  nn::Tensor emb({dims, frames.size()});
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto values = sq_dequantize(frames[f], sq_);
    for (std::size_t d = 0; d < dims; ++d) {
      emb.channel(d)[f] = static_cast<float>(values[d]);
    }
  }
  const nn::Tensor y = nn::forward(arch_, *weights_, emb).output;
  SampleBuffer out(kWidebandRate, y.data.size());
  std::transform(y.data.begin(), y.data.end(), out.samples.begin(),
                 [](float v) { return std::clamp(static_cast<double>(v), -1.0, 1.0); });
  return out;
}

std::vector<QuantizedFrame> wbnc_encode(const SampleBuffer& wideband,
                                        const nn::ModelWeights& weights) {
  WbncEncoder enc(std::make_shared<const nn::ModelWeights>(weights));
  return enc.Encode(wideband);
}

SampleBuffer wbnc_decode(std::span<const QuantizedFrame> frames,
                         const nn::ModelWeights& weights) {
  WbncDecoder dec(std::make_shared<const nn::ModelWeights>(weights));
  return dec.Decode(frames);
}

}  // namespace swbcodec
