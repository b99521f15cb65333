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

#ifndef SWBCODEC_FILTERBANK_H_
#define SWBCODEC_FILTERBANK_H_

#include <cstddef>
#include <span>
#include <vector>

#include "swbcodec/audio.h"

namespace swbcodec {

// Two-channel QMF prototype. The analysis lowpass is `prototype_taps`, the
// highpass is its (-1)^n modulation, and synthesis uses the same pair with
// the highpass negated, so aliasing cancels exactly and the overall response
// is a pure delay of num_taps - 1 samples up to the power-symmetry ripple.
struct QmfSpec {
  std::vector<double> prototype_taps;

  std::size_t num_taps() const { return prototype_taps.size(); }
  // Analysis + synthesis delay at the full rate.
  std::size_t delay() const { return prototype_taps.size() - 1; }
};

// 64-tap Kaiser-windowed half-band design, normalized so that
// |H(w)|^2 + |H(pi - w)|^2 ~= 2.
QmfSpec DefaultQmfSpec();

// Kaiser-windowed sinc lowpass with cutoff `cutoff` (fraction of Nyquist).
std::vector<double> KaiserLowpass(std::size_t num_taps, double cutoff,
                                  double beta);

// max over a dense grid of | |H(w)|^2 + |H(pi-w)|^2 - 2 |.
double PowerSymmetryError(std::span<const double> taps,
                          std::size_t grid_points = 2048);

// Both bands run at half the input rate. `high` is spectrally flipped: input
// frequency f in [fs/4, fs/2] lands at fs/2 - f in the decimated band. Use
// FlipSpectrum() to bring it to natural order (f - fs/4) and back.
struct BandPair {
  SampleBuffer low;
  SampleBuffer high;
};

// Multiplies every odd-indexed sample by -1, mirroring the spectrum around
// a quarter of the sample rate. Self-inverse.
void FlipSpectrum(std::span<double> x);

// Streaming analysis; keeps filter history across calls.
class QmfAnalyzer {
 public:
  explicit QmfAnalyzer(QmfSpec spec = DefaultQmfSpec());

  BandPair Process(std::span<const double> input, int input_rate);
  void Reset();

 private:
  std::vector<double> taps_;
  // Last num_taps - 1 input samples, oldest first.
  std::vector<double> history_;
};

// Streaming synthesis; keeps filter history across calls.
class QmfSynthesizer {
 public:
  explicit QmfSynthesizer(QmfSpec spec = DefaultQmfSpec());

  SampleBuffer Process(std::span<const double> low, std::span<const double> high,
                       int output_rate);
  void Reset();

 private:
  std::vector<double> even_taps_;
  std::vector<double> odd_taps_;
  std::vector<double> diff_history_;
  std::vector<double> sum_history_;
};

// Whole-buffer analysis from zero initial state.
BandPair qmf_analyze(const SampleBuffer& input, const QmfSpec& spec);
// Whole-buffer synthesis from zero initial state; output is delayed by
// spec.delay() samples relative to the analysed input.
SampleBuffer qmf_synthesize(const BandPair& bands, const QmfSpec& spec);

// Cosine-modulated pseudo-QMF bank. Analysis and synthesis are both
// zero-phase aligned ("same" convolution), so the round trip has no delay.
struct PqmfSpec {
  std::size_t num_bands = 4;
  std::vector<double> prototype_taps;
};

PqmfSpec DefaultPqmfSpec();

std::vector<SampleBuffer> pqmf_analyze(const SampleBuffer& input,
                                       const PqmfSpec& spec);
SampleBuffer pqmf_synthesize(std::span<const SampleBuffer> bands,
                             const PqmfSpec& spec);

}  // namespace swbcodec

#endif  // SWBCODEC_FILTERBANK_H_
