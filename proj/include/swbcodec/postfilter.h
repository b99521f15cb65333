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

#ifndef SWBCODEC_POSTFILTER_H_
#define SWBCODEC_POSTFILTER_H_

#include <cstddef>
#include <span>
#include <vector>

#include "swbcodec/audio.h"

namespace swbcodec {

struct PitchEstimate {
  std::size_t lag = 0;  // 0 when unvoiced
  double voicing = 0.0;
};

struct PostfilterConfig {
  std::size_t min_lag = 32;
  std::size_t max_lag = 320;
  double comb_gain = 0.25;
  double voicing_threshold = 0.4;
  std::size_t window = 2 * kFrameSamplesWb;
  std::size_t crossfade = 32;
  // Scale the comb gain by the voicing strength. Keeps the per-frame energy
  // change within 0.5 dB for weakly voiced frames.
  bool scale_by_voicing = true;
  // The comb gain is backed off in `gain_steps` equal steps until the frame
  // energy changes by at most this much.
  double max_energy_change_db = 0.5;
  int gain_steps = 16;

  void Validate() const;
  // Gain actually used for `pitch`; 0 means bypass.
  double EffectiveGain(const PitchEstimate& pitch) const;
};

// Normalized autocorrelation pitch search over [min_lag, max_lag] on a window
// of at least 2 * max_lag samples. Ties go to the shorter lag, so a pulse
// train reports its fundamental rather than a multiple.
PitchEstimate estimate_pitch(std::span<const double> window, const PostfilterConfig& cfg = {});

// |H(w)| of the comb for lag `lag` and gain `gain`.
double CombMagnitude(double omega, std::size_t lag, double gain);

// y[n] = (x[n] + g x[n - lag]) / (1 + g), `x` being one frame. Samples whose
// delayed input would precede `x` pass unchanged. g starts at
// EffectiveGain(pitch) and is lowered while the energy of y strays more than
// max_energy_change_db from that of x. Bypass returns `x` bit-exactly.
SampleBuffer apply_postfilter(const SampleBuffer& x, const PitchEstimate& pitch,
                              const PostfilterConfig& cfg = {});

// Streaming form used by the decoder: keeps the input history across frames,
// limits the gain per frame as apply_postfilter does, and cross-fades
// linearly when the comb parameters change.
class Postfilter {
 public:
  explicit Postfilter(PostfilterConfig cfg = {});

  std::vector<double> ProcessFrame(std::span<const double> frame);
  // Same, with the pitch supplied by the caller.
  std::vector<double> ProcessFrame(std::span<const double> frame, const PitchEstimate& pitch);

  const PitchEstimate& last_pitch() const { return prev_pitch_; }
  void Reset();

 private:
  PostfilterConfig cfg_;
  std::vector<double> history_;
  std::size_t seen_ = 0;
  PitchEstimate prev_pitch_;
  double prev_gain_ = 0.0;
};

// Runs a fresh Postfilter over `x` in 320-sample frames.
SampleBuffer postfilter_stream(const SampleBuffer& x, const PostfilterConfig& cfg = {});

}  // namespace swbcodec

#endif  // SWBCODEC_POSTFILTER_H_
