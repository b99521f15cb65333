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

#include "swbcodec/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "swbcodec/architectures.h"
#include "swbcodec/error.h"
#include "swbcodec/filterbank.h"
#include "swbcodec/weights_io.h"

namespace swbcodec {
namespace {

// QMF bands carry a sqrt(2) gain; the wideband codec and BWE work at the
// level a 16 kHz recording of the same sound would have.
constexpr double kBandGain = std::numbers::sqrt2;

void Scale(std::span<double> x, double g) {
  for (double& v : x) v *= g;
}

SampleBuffer ZeroPadded(const SampleBuffer& in, std::size_t length) {
  SampleBuffer out(in.sample_rate, length);
  std::copy(in.samples.begin(), in.samples.end(), out.samples.begin());
  return out;
}

std::size_t RoundUp(std::size_t n, std::size_t multiple) {
  return (n + multiple - 1) / multiple * multiple;
}

}  // namespace

CodecWeights RandomCodecWeights(std::uint64_t seed) {
  return {std::make_shared<const nn::ModelWeights>(nn::RandomWeights(EncoderArchitecture(), seed)),
          std::make_shared<const nn::ModelWeights>(
              nn::RandomWeights(DecoderArchitecture(), seed + 1))};
}

CodecWeights LoadCodecWeights(const std::filesystem::path& dir) {
  return {std::make_shared<const nn::ModelWeights>(
              nn::LoadWeightsFor(dir / kEncoderWeightsFile, EncoderArchitecture())),
          std::make_shared<const nn::ModelWeights>(
              nn::LoadWeightsFor(dir / kDecoderWeightsFile, DecoderArchitecture()))};
}

void SaveCodecWeights(const CodecWeights& weights, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nn::save_weights(*weights.encoder, dir / kEncoderWeightsFile);
  nn::save_weights(*weights.decoder, dir / kDecoderWeightsFile);
}

StreamMode DefaultModeForRate(int sample_rate) {
  if (sample_rate == kWidebandRate) return StreamMode::kWideband;
  if (sample_rate == kSuperWidebandRate) return StreamMode::kSuperWideband;
  throw CodecError(ErrorCode::kFormat,
                   "unsupported sample rate " + std::to_string(sample_rate) +
                       " Hz; expected 16000 or 32000");
}

SpeechEncoder::SpeechEncoder(std::shared_ptr<const nn::ModelWeights> weights, BweConfig bwe)
    : wbnc_(std::move(weights)), bwe_(bwe) {}

EncodedStream SpeechEncoder::Encode(const SampleBuffer& input,
                                    std::optional<StreamMode> mode) const {
  const StreamMode m = mode.value_or(DefaultModeForRate(input.sample_rate));
  DefaultModeForRate(input.sample_rate);  // rejects unsupported rates
  Require(!(m == StreamMode::kSuperWideband && input.sample_rate != kSuperWidebandRate),
          ErrorCode::kInvalidArgument, "swb mode needs 32 kHz input");

  EncodedStream out;
  out.header.mode = m;
  out.header.sample_rate = static_cast<std::uint32_t>(ModeSampleRate(m));
  const std::size_t len = input.size();
  std::size_t padded = 0;
  std::size_t output_len = 0;
  if (input.sample_rate == kSuperWidebandRate) {
    padded = RoundUp(len, kFrameSamplesSwb);
    output_len = m == StreamMode::kSuperWideband ? len : (len + 1) / 2;
  } else {
    padded = RoundUp(len, kFrameSamplesWb);
    output_len = len;
  }

  SampleBuffer wideband;
  std::vector<BweParams> bwe;
  if (input.sample_rate == kSuperWidebandRate) {
    BandPair bands = qmf_analyze(ZeroPadded(input, padded), DefaultQmfSpec());
    Scale(bands.low.view(), 1.0 / kBandGain);
    wideband = std::move(bands.low);
    if (m == StreamMode::kSuperWideband) {
      FlipSpectrum(bands.high.view());
      Scale(bands.high.view(), 1.0 / kBandGain);
      bwe = bwe_encode(bands.high, bwe_);
    }
  } else {
    wideband = ZeroPadded(input, padded);
  }

  const auto wb_frames = wbnc_.Encode(wideband);
  const std::size_t frames = wb_frames.size();
  const std::size_t frame_samples = m == StreamMode::kSuperWideband ? kFrameSamplesSwb : kFrameSamplesWb;
  out.header.padding_samples = static_cast<std::uint16_t>(frames * frame_samples - output_len);
  out.frames.reserve(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    std::optional<BweParams> p;
    if (m == StreamMode::kSuperWideband) p = bwe[f];
    out.frames.push_back(pack_frame(wb_frames[f], p, m));
  }
  return out;
}

SpeechDecoder::SpeechDecoder(std::shared_ptr<const nn::ModelWeights> weights, BweConfig bwe)
    : wbnc_(std::move(weights)), bwe_(bwe) {}

DecodedAudio SpeechDecoder::Decode(const StreamHeader& header,
                                   std::span<const BitstreamFrame> frames,
                                   const DecodeOptions& options) const {
  const bool swb = header.mode == StreamMode::kSuperWideband;
  const std::size_t frame_samples = swb ? kFrameSamplesSwb : kFrameSamplesWb;
  const std::size_t total = frames.size() * frame_samples;
  Require(header.padding_samples <= total, ErrorCode::kFormat,
          "header padding " + std::to_string(header.padding_samples) + " exceeds " +
              std::to_string(total) + " decoded samples");

  DecodedAudio out;
  out.audio = SampleBuffer(ModeSampleRate(header.mode), total - header.padding_samples);
  if (frames.empty()) return out;

  std::vector<QuantizedFrame> wb_frames;
  std::vector<BweParams> bwe;
  wb_frames.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    try {
      UnpackedFrame u = unpack_frame(frames[f].bytes, header.mode);
      wb_frames.push_back(std::move(u.wb));
      if (u.bwe) bwe.push_back(*u.bwe);
    } catch (const CodecError& e) {
      throw CodecError(e.code(), "frame " + std::to_string(f) + ": " + e.what());
    }
  }

  SampleBuffer wideband = wbnc_.Decode(wb_frames);
  if (options.postfilter) wideband = postfilter_stream(wideband, options.postfilter_config);

  if (!swb) {
    std::copy_n(wideband.samples.begin(), out.audio.size(), out.audio.samples.begin());
    return out;
  }

  out.suspect_frames = FindGainSpikes(bwe);
  SampleBuffer high = bwe_decode(bwe, wideband, bwe_);
  const QmfSpec qmf = DefaultQmfSpec();
  // Zero band samples past the last frame flush the synthesis filter so the
  // delay can be trimmed without dropping the end of the signal.
  const std::size_t flush = (qmf.delay() + 1) / 2;
  for (SampleBuffer* band : {&wideband, &high}) {
    Scale(band->view(), kBandGain);
    band->samples.resize(band->size() + flush, 0.0);
  }
  const SampleBuffer full = qmf_synthesize({std::move(wideband), std::move(high)}, qmf);
  Require(full.size() >= qmf.delay() + out.audio.size(), ErrorCode::kFormat,
          "stream too short for its declared padding");
  std::copy_n(full.samples.begin() + static_cast<std::ptrdiff_t>(qmf.delay()), out.audio.size(),
              out.audio.samples.begin());
  for (double& s : out.audio.samples) s = std::clamp(s, -1.0, 1.0);
  return out;
}

std::vector<std::size_t> FindGainSpikes(std::span<const BweParams> params) {
  std::vector<std::size_t> out;
  for (std::size_t f = 1; f + 1 < params.size(); ++f) {
    const int prev = params[f - 1].global_gain_index;
    const int next = params[f + 1].global_gain_index;
    const int cur = params[f].global_gain_index;
    if (std::abs(prev - next) > kGainNeighbourSteps) continue;
    if (std::abs(2 * cur - prev - next) > 2 * kGainSpikeSteps) out.push_back(f);
  }
  return out;
}

}  // namespace swbcodec
