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

#include "swbcodec/postfilter.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "swbcodec/error.h"

namespace swbcodec {

void PostfilterConfig::Validate() const {
  Require(comb_gain >= 0.0 && comb_gain < 1.0, ErrorCode::kConfig, "comb gain must be in [0, 1)");
  Require(min_lag > 0 && min_lag <= max_lag, ErrorCode::kConfig, "bad lag range");
  Require(2 * max_lag <= window, ErrorCode::kConfig, "lag range exceeds analysis window");
  Require(max_energy_change_db > 0.0 && gain_steps >= 1, ErrorCode::kConfig,
          "bad energy limit");
}

double PostfilterConfig::EffectiveGain(const PitchEstimate& pitch) const {
  if (pitch.lag == 0 || pitch.voicing < voicing_threshold) return 0.0;
  return scale_by_voicing ? comb_gain * std::min(pitch.voicing, 1.0) : comb_gain;
}

PitchEstimate estimate_pitch(std::span<const double> window, const PostfilterConfig& cfg) {
  cfg.Validate();
  Require(window.size() >= 2 * cfg.max_lag, ErrorCode::kInvalidArgument,
          "pitch window of " + std::to_string(window.size()) + " samples is shorter than " +
              std::to_string(2 * cfg.max_lag));
  const std::size_t n = window.size();

  // Running energies of x[L..n) and x[0..n-L) updated as L grows.
  double e_head = 0.0, e_tail = 0.0;
  for (std::size_t i = cfg.min_lag; i < n; ++i) e_head += window[i] * window[i];
  for (std::size_t i = 0; i + cfg.min_lag < n; ++i) e_tail += window[i] * window[i];

  PitchEstimate best;
  double best_r = -2.0;
  for (std::size_t lag = cfg.min_lag; lag <= cfg.max_lag; ++lag) {
    double cross = 0.0;
    for (std::size_t i = lag; i < n; ++i) cross += window[i] * window[i - lag];
    const double denom = std::sqrt(e_head * e_tail);
    if (denom > 1e-20) {
      const double r = cross / denom;
      if (r > best_r + 1e-9) {
        best_r = r;
        best.lag = lag;
      }
    }
    e_head -= window[lag] * window[lag];
    e_tail -= window[n - lag - 1] * window[n - lag - 1];
  }
  if (best.lag == 0) return {};  // zero energy
  best.voicing = std::clamp(best_r, -1.0, 1.0);
  if (best.voicing < cfg.voicing_threshold) best.lag = 0;
  return best;
}

namespace {

// Largest of g0 * (1 - k / steps), k = 0..steps, whose output energy stays
// within the limit of `input_energy`; 0 when none does.
template <typename EnergyAt>
double LimitGain(double g0, double input_energy, const PostfilterConfig& cfg, EnergyAt energy_at) {
  if (g0 == 0.0 || input_energy <= 0.0) return g0;
  for (int k = 0; k < cfg.gain_steps; ++k) {
    const double g = g0 * (1.0 - static_cast<double>(k) / cfg.gain_steps);
    const double change_db = 10.0 * std::log10(energy_at(g) / input_energy);
    if (std::abs(change_db) <= cfg.max_energy_change_db) return g;
  }
  return 0.0;
}

}  // namespace

double CombMagnitude(double omega, std::size_t lag, double gain) {
  const std::complex<double> h =
      1.0 + gain * std::polar(1.0, -omega * static_cast<double>(lag));
  return std::abs(h) / (1.0 + gain);
}

SampleBuffer apply_postfilter(const SampleBuffer& x, const PitchEstimate& pitch,
                              const PostfilterConfig& cfg) {
  auto filter = [&](double g) {
    SampleBuffer y = x;
    for (std::size_t n = pitch.lag; n < x.size(); ++n) {
      y.samples[n] = (x.samples[n] + g * x.samples[n - pitch.lag]) / (1.0 + g);
    }
    return y;
  };
  const double g = LimitGain(cfg.EffectiveGain(pitch), Energy(x.view()), cfg,
                             [&](double g) { return Energy(filter(g).view()); });
  if (g == 0.0) return x;
  return filter(g);
}

Postfilter::Postfilter(PostfilterConfig cfg) : cfg_(cfg) {
  cfg_.Validate();
  Reset();
}

void Postfilter::Reset() {
  history_.assign(std::max(cfg_.window, cfg_.max_lag), 0.0);
  seen_ = 0;
  prev_pitch_ = {};
  prev_gain_ = 0.0;
}

std::vector<double> Postfilter::ProcessFrame(std::span<const double> frame) {
  Require(frame.size() <= cfg_.window, ErrorCode::kInvalidArgument,
          "postfilter frame longer than the analysis window");
  std::vector<double> analysis(cfg_.window);
  const std::size_t from_history = cfg_.window - frame.size();
  std::copy(history_.end() - static_cast<std::ptrdiff_t>(from_history), history_.end(),
            analysis.begin());
  std::copy(frame.begin(), frame.end(), analysis.begin() + static_cast<std::ptrdiff_t>(from_history));
  return ProcessFrame(frame, estimate_pitch(analysis, cfg_));
}

std::vector<double> Postfilter::ProcessFrame(std::span<const double> frame,
                                             const PitchEstimate& pitch) {
  const std::size_t base = history_.size();
  std::vector<double> ctx(history_);
  ctx.insert(ctx.end(), frame.begin(), frame.end());

  const std::size_t prev_lag = prev_gain_ > 0.0 ? prev_pitch_.lag : 0;

  auto comb = [&](std::size_t n, std::size_t l, double g) {
    const double x = ctx[base + n];
    if (l == 0 || g == 0.0 || seen_ + n < l) return x;
    return (x + g * ctx[base + n - l]) / (1.0 + g);
  };
  auto run = [&](double gain, std::vector<double>& out) {
    const std::size_t lag = gain > 0.0 ? pitch.lag : 0;
    const bool changed = lag != prev_lag || gain != prev_gain_;
    for (std::size_t n = 0; n < frame.size(); ++n) {
      double y = comb(n, lag, gain);
      if (changed && n < cfg_.crossfade) {
        const double w = static_cast<double>(n) / static_cast<double>(cfg_.crossfade);
        y = (1.0 - w) * comb(n, prev_lag, prev_gain_) + w * y;
      }
      out[n] = y;
    }
  };

  std::vector<double> out(frame.size());
  const double gain = LimitGain(cfg_.EffectiveGain(pitch), Energy(frame), cfg_, [&](double g) {
    run(g, out);
    return Energy(out);
  });
  run(gain, out);

  history_.assign(ctx.end() - static_cast<std::ptrdiff_t>(base), ctx.end());
  seen_ += frame.size();
  prev_pitch_ = pitch;
  prev_gain_ = gain;
  return out;
}

SampleBuffer postfilter_stream(const SampleBuffer& x, const PostfilterConfig& cfg) {
  Postfilter pf(cfg);
  SampleBuffer y(x.sample_rate, x.size());
  for (std::size_t pos = 0; pos < x.size(); pos += kFrameSamplesWb) {
    const std::size_t len = std::min(kFrameSamplesWb, x.size() - pos);
    const auto out = pf.ProcessFrame(x.view().subspan(pos, len));
    std::copy(out.begin(), out.end(), y.samples.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return y;
}

}  // namespace swbcodec
