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

#ifndef SWBCODEC_SYNTH_H_
#define SWBCODEC_SYNTH_H_

#include <cstdint>
#include <vector>

#include "swbcodec/audio.h"

namespace swbcodec {

// Speech-like test material: alternating voiced (gliding harmonic source
// through three formant bumps, plus aspiration above 8 kHz), unvoiced
// (high-passed noise) and silent segments.
struct SyntheticSpeech {
  SampleBuffer audio;
  // Per-sample segment class: 0 silence, 1 voiced, 2 unvoiced.
  std::vector<std::uint8_t> labels;

  // Fraction of frame `index` (of `frame_length` samples) that is voiced.
  double VoicedFraction(std::size_t index, std::size_t frame_length) const;
};

SyntheticSpeech MakeSyntheticSpeech(double seconds, int sample_rate, std::uint64_t seed);

}  // namespace swbcodec

#endif  // SWBCODEC_SYNTH_H_
