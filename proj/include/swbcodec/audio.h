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

#ifndef SWBCODEC_AUDIO_H_
#define SWBCODEC_AUDIO_H_

#include <cstddef>
#include <span>
#include <vector>

namespace swbcodec {

inline constexpr int kWidebandRate = 16000;
inline constexpr int kSuperWidebandRate = 32000;
// One codec frame is 20 ms.
inline constexpr std::size_t kFrameSamplesWb = 320;
inline constexpr std::size_t kFrameSamplesSwb = 640;
inline constexpr int kFramesPerSecond = 50;

// Mono PCM audio, nominal full scale [-1, 1].
struct SampleBuffer {
  int sample_rate = kWidebandRate;
  std::vector<double> samples;

  SampleBuffer() = default;
  SampleBuffer(int rate, std::vector<double> data)
      : sample_rate(rate), samples(std::move(data)) {}
  SampleBuffer(int rate, std::size_t length)
      : sample_rate(rate), samples(length, 0.0) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::span<const double> view() const { return samples; }
  std::span<double> view() { return samples; }

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  // Number of whole frames of `frame_length` samples.
  std::size_t num_frames(std::size_t frame_length) const {
    return samples.size() / frame_length;
  }
  std::span<const double> frame(std::size_t index,
                                std::size_t frame_length) const {
    return view().subspan(index * frame_length, frame_length);
  }
};

double Energy(std::span<const double> x);
double Rms(std::span<const double> x);
// 10*log10 of a power value, floored at -200 dB.
double PowerToDb(double power);

}  // namespace swbcodec

#endif  // SWBCODEC_AUDIO_H_
