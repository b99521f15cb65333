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

#include "swbcodec/bwe.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "swbcodec/error.h"
#include "swbcodec/filterbank.h"
#include "swbcodec/transform.h"

namespace swbcodec {
namespace {

constexpr double kSilenceRms = 1e-9;
constexpr std::uint64_t kNoiseSeed = 0x5eedb0e5ULL;

// Signal padded by half a block on both sides so that block f is centred on
// codec frame f.
std::vector<double> PadForBlocks(std::span<const double> x, std::size_t n) {
  std::vector<double> padded(x.size() + n, 0.0);
  std::copy(x.begin(), x.end(), padded.begin() + static_cast<std::ptrdiff_t>(n / 2));
  return padded;
}

double DbToAmplitude(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace

int BweConfig::QuantizeGainDb(double db) const {
  if (!(db > gain_min_db)) return 0;
  const long idx = std::lround((db - gain_min_db) / gain_step_db());
  return static_cast<int>(std::clamp<long>(idx, 0, gain_levels - 1));
}

int BweConfig::QuantizeEnvelopeDb(double db) const {
  if (!(db > envelope_min_db)) return 0;
  const long idx = std::lround((db - envelope_min_db) / envelope_step_db);
  return static_cast<int>(std::clamp<long>(idx, 0, envelope_levels - 1));
}

std::array<double, kBweSubbands> BweSubbandTargets(const BweParams& params,
                                                   const BweConfig& cfg) {
  std::array<double, kBweSubbands> targets{};
  double power = 0.0;
  for (int b = 0; b < kBweSubbands; ++b) {
    targets[b] = DbToAmplitude(cfg.envelope_db(params.envelope_indices[b]));
    power += targets[b] * targets[b];
  }
  const double gain = DbToAmplitude(cfg.gain_db(params.global_gain_index));
  const double norm = gain * std::sqrt(kBweSubbands / power);
  for (double& t : targets) t *= norm;
  return targets;
}

std::vector<BweParams> bwe_encode(const SampleBuffer& high_band, const BweConfig& cfg) {
  const std::size_t n = cfg.half_window;
  Require(high_band.size() % n == 0, ErrorCode::kInvalidArgument,
          "BWE input length " + std::to_string(high_band.size()) +
              " is not a multiple of " + std::to_string(n));
  const std::size_t frames = high_band.size() / n;
  const std::vector<double> padded = PadForBlocks(high_band.view(), n);
  const std::size_t width = cfg.subband_width();

  std::vector<BweParams> out(frames);
  std::vector<double> coeffs(n);
  for (std::size_t f = 0; f < frames; ++f) {
    MdctBlock(std::span<const double>(padded).subspan(f * n, 2 * n), coeffs);
    const double frame_rms = Rms(coeffs);
    BweParams& p = out[f];
    if (frame_rms < kSilenceRms) continue;  // all-floor parameters
    p.global_gain_index =
        static_cast<std::uint8_t>(cfg.QuantizeGainDb(20.0 * std::log10(frame_rms)));
    for (int b = 0; b < kBweSubbands; ++b) {
      const double sub = Rms(std::span<const double>(coeffs).subspan(b * width, width));
      const double rel_db = sub > 0.0 ? 20.0 * std::log10(sub / frame_rms) : -1000.0;
      p.envelope_indices[b] = static_cast<std::uint8_t>(cfg.QuantizeEnvelopeDb(rel_db));
    }
  }
  return out;
}

SampleBuffer bwe_decode(std::span<const BweParams> params, const SampleBuffer& decoded_wb,
                        const BweConfig& cfg) {
  const std::size_t n = cfg.half_window;
  Require(decoded_wb.size() == n * params.size(), ErrorCode::kInvalidArgument,
          "BWE decode needs " + std::to_string(n * params.size()) +
              " wideband samples, got " + std::to_string(decoded_wb.size()));
  const std::size_t frames = params.size();
  const std::vector<double> padded = PadForBlocks(decoded_wb.view(), n);
  const std::size_t width = cfg.subband_width();
  const std::size_t half = n / 2;

  std::vector<double> synth(padded.size() + n, 0.0);
  std::vector<double> source(n), high(n), block(2 * n);
  for (std::size_t f = 0; f < frames; ++f) {
    MdctBlock(std::span<const double>(padded).subspan(f * n, 2 * n), source);
    // The upper half of the wideband (4-8 kHz) is copied twice.
    for (std::size_t k = 0; k < n; ++k) high[k] = source[half + k % half];

    const auto targets = BweSubbandTargets(params[f], cfg);
    std::mt19937_64 rng(kNoiseSeed + f);
    for (int b = 0; b < kBweSubbands; ++b) {
      std::span<double> sub(high.data() + b * width, width);
      double rms = Rms(sub);
      if (rms < kSilenceRms) {
        // Nothing to replicate: fill with uniform noise of unit variance.
        for (double& v : sub) {
          const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          v = (2.0 * u - 1.0) * std::sqrt(3.0);
        }
        rms = Rms(sub);
      }
      const double scale = targets[b] / rms;
      for (double& v : sub) v *= scale;
    }
    ImdctBlock(high, block);
    for (std::size_t i = 0; i < 2 * n; ++i) synth[f * n + i] += block[i];
  }

  SampleBuffer out(decoded_wb.sample_rate, frames * n);
  std::copy_n(synth.begin() + static_cast<std::ptrdiff_t>(half), frames * n,
              out.samples.begin());
  FlipSpectrum(out.view());
  return out;
}

}  // namespace swbcodec
