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

#include "support/signals.h"

#include <cmath>
#include <numbers>
#include <random>

namespace signals {

std::vector<double> WhiteNoise(std::size_t n, std::uint64_t seed, double rms) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, rms);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

std::vector<double> Ar2(std::size_t n, std::uint64_t seed, double a1, double a2, double rms) {
  auto e = WhiteNoise(n, seed, 1.0);
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = e[i] + (i >= 1 ? a1 * x[i - 1] : 0.0) + (i >= 2 ? a2 * x[i - 2] : 0.0);
  }
  const double cur = swbcodec::Rms(x);
  for (double& v : x) v *= rms / cur;
  return x;
}

std::vector<double> Sine(std::size_t n, double hz, int rate, double amp, double phase) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / rate + phase);
  }
  return x;
}

std::vector<double> PulseTrain(std::size_t n, std::size_t period, double amp) {
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; i += period) x[i] = amp;
  return x;
}

std::vector<double> Harmonic(std::size_t n, double f0, int rate, double max_hz, double amp) {
  std::vector<double> x(n, 0.0);
  for (int k = 1; k * f0 < max_hz; ++k) {
    const auto h = Sine(n, k * f0, rate, amp / k, 0.3 * k);
    for (std::size_t i = 0; i < n; ++i) x[i] += h[i];
  }
  return x;
}

swbcodec::SampleBuffer Buffer(int rate, std::vector<double> samples) {
  return swbcodec::SampleBuffer(rate, std::move(samples));
}

}  // namespace signals
