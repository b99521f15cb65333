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

#ifndef SWBCODEC_BWE_H_
#define SWBCODEC_BWE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "swbcodec/audio.h"

namespace swbcodec {

inline constexpr int kBweSubbands = 8;
inline constexpr int kBweBitsPerFrame = 40;

struct BweConfig {
  std::size_t half_window = 320;
  int gain_levels = 256;
  double gain_min_db = -60.0;
  double gain_max_db = 20.0;
  int envelope_levels = 16;
  double envelope_min_db = -45.0;
  double envelope_step_db = 3.0;

  std::size_t subband_width() const { return half_window / kBweSubbands; }
  double gain_step_db() const { return (gain_max_db - gain_min_db) / (gain_levels - 1); }
  double gain_db(int index) const { return gain_min_db + index * gain_step_db(); }
  double envelope_db(int index) const { return envelope_min_db + index * envelope_step_db; }
  int QuantizeGainDb(double db) const;
  int QuantizeEnvelopeDb(double db) const;
};

// 8-bit log global gain plus eight 4-bit subband levels relative to it:
// exactly 40 bits per 20 ms frame.
struct BweParams {
  std::uint8_t global_gain_index = 0;
  std::array<std::uint8_t, kBweSubbands> envelope_indices{};

  bool operator==(const BweParams&) const = default;
};

// Per-subband coefficient RMS the decoder aims for. The dequantized envelope
// is renormalized so the mean subband power equals the global gain squared;
// envelope clipping at 0 dB therefore moves energy between subbands but
// never changes the frame energy.
std::array<double, kBweSubbands> BweSubbandTargets(const BweParams& params,
                                                   const BweConfig& cfg);

// `high_band` is the 8-16 kHz band at 16 kHz in natural spectral order (QMF
// flip already undone). MDCT blocks are centred on the codec frames: frame f
// uses samples [320 f - 160, 320 f + 480), zero outside the signal.
std::vector<BweParams> bwe_encode(const SampleBuffer& high_band, const BweConfig& cfg = {});

// Regenerates the high band from the 4-8 kHz half of `decoded_wb`, shaped to
// the transmitted envelope. Returns the band with the QMF spectral flip
// re-applied, ready for qmf_synthesize.
SampleBuffer bwe_decode(std::span<const BweParams> params, const SampleBuffer& decoded_wb,
                        const BweConfig& cfg = {});

}  // namespace swbcodec

#endif  // SWBCODEC_BWE_H_
