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

#include "swbcodec/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace swbcodec {
namespace {

constexpr double kRampSeconds = 0.01;

struct Formant {
  double centre_hz;
  double width_hz;
  double gain;
};

double FormantGain(double hz, const std::vector<Formant>& formants) {
  double g = 0.02;
  for (const auto& f : formants) {
    const double d = (hz - f.centre_hz) / f.width_hz;
    g += f.gain * std::exp(-0.5 * d * d);
  }
  return g;
}

}  // namespace

double SyntheticSpeech::VoicedFraction(std::size_t index, std::size_t frame_length) const {
  const std::size_t begin = index * frame_length;
  const std::size_t end = std::min(labels.size(), begin + frame_length);
  if (begin >= end) return 0.0;
  const auto voiced = std::count(labels.begin() + static_cast<std::ptrdiff_t>(begin),
                                 labels.begin() + static_cast<std::ptrdiff_t>(end), 1);
  return static_cast<double>(voiced) / static_cast<double>(frame_length);
}

SyntheticSpeech MakeSyntheticSpeech(double seconds, int sample_rate, std::uint64_t seed) {
  const auto total = static_cast<std::size_t>(seconds * sample_rate);
  SyntheticSpeech out{SampleBuffer(sample_rate, total), std::vector<std::uint8_t>(total, 0)};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double fs = sample_rate;
  const double nyquist_limit = std::min(15000.0, 0.47 * fs);
  const auto ramp = static_cast<std::size_t>(kRampSeconds * fs);

  std::size_t pos = 0;
  while (pos < total) {
    const double r = uni(rng);
    const std::uint8_t kind = r < 0.6 ? 1 : (r < 0.8 ? 2 : 0);
    const auto len = std::min(total - pos, static_cast<std::size_t>((0.15 + 0.25 * uni(rng)) * fs));
    const double level = 0.05 + 0.25 * uni(rng);
    auto envelope = [&](std::size_t i) {
      const double a = std::min(1.0, static_cast<double>(std::min(i, len - 1 - i)) / ramp);
      return 0.5 - 0.5 * std::cos(std::numbers::pi * a);
    };

    if (kind == 1) {
      const double f0_start = 100.0 + 120.0 * uni(rng);
      const double f0_end = f0_start * (0.8 + 0.4 * uni(rng));
      const std::vector<Formant> formants = {{300.0 + 500.0 * uni(rng), 120.0, 1.0},
                                             {900.0 + 1400.0 * uni(rng), 200.0, 0.5},
                                             {2300.0 + 1200.0 * uni(rng), 300.0, 0.25}};
      const int max_harmonics = static_cast<int>(nyquist_limit / std::min(f0_start, f0_end));
      std::vector<double> phase(static_cast<std::size_t>(max_harmonics) + 1, 0.0);
      for (auto& p : phase) p = 2.0 * std::numbers::pi * uni(rng);
      double prev_hp = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(len);
        const double f0 = f0_start + (f0_end - f0_start) * t;
        double v = 0.0;
        for (int k = 1; k <= max_harmonics; ++k) {
          const double hz = k * f0;
          if (hz >= nyquist_limit) break;
          phase[k] += 2.0 * std::numbers::pi * hz / fs;
          v += FormantGain(hz, formants) / std::sqrt(static_cast<double>(k)) * std::sin(phase[k]);
        }
        // First-difference (high-passed) aspiration keeps the top band alive.
        const double n = gauss(rng);
        v = 0.4 * v + 0.034 * (n - prev_hp);
        prev_hp = n;
        out.audio.samples[pos + i] = level * envelope(i) * v;
      }
    } else if (kind == 2) {
      double prev = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double n = gauss(rng);
        out.audio.samples[pos + i] = 0.7 * level * envelope(i) * (n - prev);
        prev = n;
      }
    }
    std::fill_n(out.labels.begin() + static_cast<std::ptrdiff_t>(pos), len, kind);
    pos += len;
  }
  for (double& s : out.audio.samples) s = std::clamp(s, -1.0, 1.0);
  return out;
}

}  // namespace swbcodec
