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

#ifndef SWBCODEC_PIPELINE_H_
#define SWBCODEC_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swbcodec/audio.h"
#include "swbcodec/bitstream.h"
#include "swbcodec/bwe.h"
#include "swbcodec/nn.h"
#include "swbcodec/postfilter.h"
#include "swbcodec/wbnc.h"

namespace swbcodec {

struct CodecWeights {
  std::shared_ptr<const nn::ModelWeights> encoder;
  std::shared_ptr<const nn::ModelWeights> decoder;
};

inline constexpr char kEncoderWeightsFile[] = "encoder.pgwt";
inline constexpr char kDecoderWeightsFile[] = "decoder.pgwt";

CodecWeights RandomCodecWeights(std::uint64_t seed);
// Loads <dir>/encoder.pgwt and <dir>/decoder.pgwt, checking fingerprints.
CodecWeights LoadCodecWeights(const std::filesystem::path& dir);
void SaveCodecWeights(const CodecWeights& weights, const std::filesystem::path& dir);

// Mode implied by the input rate: 16 kHz -> wb, 32 kHz -> swb.
StreamMode DefaultModeForRate(int sample_rate);

struct EncodedStream {
  StreamHeader header;
  std::vector<BitstreamFrame> frames;
};

// SWB: 32 kHz input; the decoder flushes the QMF delay instead of the
// encoder spending a frame on it, so 1 s is exactly 50 frames.
// WB: 16 kHz input, or 32 kHz input reduced to its QMF low band.
class SpeechEncoder {
 public:
  explicit SpeechEncoder(std::shared_ptr<const nn::ModelWeights> weights, BweConfig bwe = {});

  EncodedStream Encode(const SampleBuffer& input, std::optional<StreamMode> mode = {}) const;

 private:
  WbncEncoder wbnc_;
  BweConfig bwe_;
};

struct DecodeOptions {
  bool postfilter = true;
  PostfilterConfig postfilter_config;
};

struct DecodedAudio {
  SampleBuffer audio;
  // Frames whose BWE gain is an isolated outlier against both neighbours;
  // the format has no checksum, so this is the only corruption signal.
  std::vector<std::size_t> suspect_frames;
};

class SpeechDecoder {
 public:
  explicit SpeechDecoder(std::shared_ptr<const nn::ModelWeights> weights, BweConfig bwe = {});

  DecodedAudio Decode(const StreamHeader& header, std::span<const BitstreamFrame> frames,
                      const DecodeOptions& options = {}) const;

 private:
  WbncDecoder wbnc_;
  BweConfig bwe_;
};

// Gain-index distance beyond which an isolated frame is reported (about
// 15 dB on the BWE gain grid), and the maximum neighbour disagreement.
inline constexpr int kGainSpikeSteps = 48;
inline constexpr int kGainNeighbourSteps = 16;
std::vector<std::size_t> FindGainSpikes(std::span<const BweParams> params);

}  // namespace swbcodec

#endif  // SWBCODEC_PIPELINE_H_
