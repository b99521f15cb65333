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

#include "swbcodec/filterbank.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "swbcodec/error.h"

namespace swbcodec {
namespace {

// Found by a grid search minimizing PowerSymmetryError for 64 taps.
constexpr std::size_t kQmfTaps = 64;
constexpr double kQmfCutoff = 0.5171;
constexpr double kQmfBeta = 9.4;

constexpr std::size_t kPqmfBands = 4;
constexpr std::size_t kPqmfTaps = 63;
constexpr double kPqmfCutoff = 0.142;
constexpr double kPqmfBeta = 9.0;

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

std::vector<double> KaiserLowpass(std::size_t num_taps, double cutoff,
                                  double beta) {
  std::vector<double> h(num_taps);
  const double center = 0.5 * static_cast<double>(num_taps - 1);
  const double norm = std::cyl_bessel_i(0.0, beta);
  for (std::size_t n = 0; n < num_taps; ++n) {
    const double t = static_cast<double>(n) - center;
    const double r = num_taps > 1 ? t / center : 0.0;
    const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
    h[n] = cutoff * Sinc(cutoff * t) * w;
  }
  return h;
}

QmfSpec DefaultQmfSpec() {
  QmfSpec spec;
  spec.prototype_taps = KaiserLowpass(kQmfTaps, kQmfCutoff, kQmfBeta);
  double sum = 0.0;
  for (double v : spec.prototype_taps) sum += v;
  const double scale = std::numbers::sqrt2 / sum;
  for (double& v : spec.prototype_taps) v *= scale;
  return spec;
}

double PowerSymmetryError(std::span<const double> taps,
                          std::size_t grid_points) {
  auto power = [&](double w) {
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < taps.size(); ++n) {
      re += taps[n] * std::cos(w * static_cast<double>(n));
      im -= taps[n] * std::sin(w * static_cast<double>(n));
    }
    return re * re + im * im;
  };
  double worst = 0.0;
  for (std::size_t i = 0; i <= grid_points; ++i) {
    const double w = std::numbers::pi * static_cast<double>(i) /
                     static_cast<double>(grid_points);
    worst = std::max(worst,
                     std::abs(power(w) + power(std::numbers::pi - w) - 2.0));
  }
  return worst;
}

void FlipSpectrum(std::span<double> x) {
  for (std::size_t i = 1; i < x.size(); i += 2) x[i] = -x[i];
}

QmfAnalyzer::QmfAnalyzer(QmfSpec spec) : taps_(std::move(spec.prototype_taps)) {
  Require(!taps_.empty() && taps_.size() % 2 == 0, ErrorCode::kConfig,
          "QMF prototype must have an even, nonzero number of taps");
  history_.assign(taps_.size() - 1, 0.0);
}

void QmfAnalyzer::Reset() { std::fill(history_.begin(), history_.end(), 0.0); }

BandPair QmfAnalyzer::Process(std::span<const double> input, int input_rate) {
  Require(input.size() % 2 == 0, ErrorCode::kInvalidArgument,
          "QMF analysis needs an even number of samples, got " +
              std::to_string(input.size()));
  const std::size_t hist = history_.size();
  std::vector<double> buf(hist + input.size());
  std::copy(history_.begin(), history_.end(), buf.begin());
  std::copy(input.begin(), input.end(), buf.begin() + static_cast<std::ptrdiff_t>(hist));

  const std::size_t half = input.size() / 2;
  BandPair bands{SampleBuffer(input_rate / 2, half),
                 SampleBuffer(input_rate / 2, half)};
  const std::size_t num_taps = taps_.size();
  for (std::size_t m = 0; m < half; ++m) {
    // Newest sample of this output is input[2m] == buf[hist + 2m].
    const double* x = buf.data() + hist + 2 * m;
    double even = 0.0, odd = 0.0;
    for (std::size_t k = 0; k < num_taps; k += 2) {
      even += taps_[k] * x[-static_cast<std::ptrdiff_t>(k)];
      odd += taps_[k + 1] * x[-static_cast<std::ptrdiff_t>(k + 1)];
    }
    bands.low.samples[m] = even + odd;
    bands.high.samples[m] = even - odd;
  }
  std::copy(buf.end() - static_cast<std::ptrdiff_t>(hist), buf.end(),
            history_.begin());
  return bands;
}

QmfSynthesizer::QmfSynthesizer(QmfSpec spec) {
  const auto& taps = spec.prototype_taps;
  Require(!taps.empty() && taps.size() % 2 == 0, ErrorCode::kConfig,
          "QMF prototype must have an even, nonzero number of taps");
  for (std::size_t k = 0; k < taps.size(); k += 2) {
    even_taps_.push_back(taps[k]);
    odd_taps_.push_back(taps[k + 1]);
  }
  diff_history_.assign(even_taps_.size() - 1, 0.0);
  sum_history_.assign(odd_taps_.size() - 1, 0.0);
}

void QmfSynthesizer::Reset() {
  std::fill(diff_history_.begin(), diff_history_.end(), 0.0);
  std::fill(sum_history_.begin(), sum_history_.end(), 0.0);
}

SampleBuffer QmfSynthesizer::Process(std::span<const double> low,
                                     std::span<const double> high,
                                     int output_rate) {
  Require(low.size() == high.size(), ErrorCode::kInvalidArgument,
          "QMF synthesis band lengths differ: " + std::to_string(low.size()) +
              " vs " + std::to_string(high.size()));
  const std::size_t hist = diff_history_.size();
  const std::size_t n = low.size();
  std::vector<double> diff(hist + n), sum(hist + n);
  std::copy(diff_history_.begin(), diff_history_.end(), diff.begin());
  std::copy(sum_history_.begin(), sum_history_.end(), sum.begin());
  for (std::size_t m = 0; m < n; ++m) {
    diff[hist + m] = low[m] - high[m];
    sum[hist + m] = low[m] + high[m];
  }

  SampleBuffer out(output_rate, 2 * n);
  const std::size_t phase_taps = even_taps_.size();
  for (std::size_t m = 0; m < n; ++m) {
    const double* d = diff.data() + hist + m;
    const double* s = sum.data() + hist + m;
    double even = 0.0, odd = 0.0;
    for (std::size_t j = 0; j < phase_taps; ++j) {
      even += even_taps_[j] * d[-static_cast<std::ptrdiff_t>(j)];
      odd += odd_taps_[j] * s[-static_cast<std::ptrdiff_t>(j)];
    }
    out.samples[2 * m] = even;
    out.samples[2 * m + 1] = odd;
  }
  std::copy(diff.end() - static_cast<std::ptrdiff_t>(hist), diff.end(),
            diff_history_.begin());
  std::copy(sum.end() - static_cast<std::ptrdiff_t>(hist), sum.end(),
            sum_history_.begin());
  return out;
}

BandPair qmf_analyze(const SampleBuffer& input, const QmfSpec& spec) {
  QmfAnalyzer analyzer(spec);
  return analyzer.Process(input.view(), input.sample_rate);
}

SampleBuffer qmf_synthesize(const BandPair& bands, const QmfSpec& spec) {
  QmfSynthesizer synthesizer(spec);
  return synthesizer.Process(bands.low.view(), bands.high.view(),
                             bands.low.sample_rate * 2);
}

PqmfSpec DefaultPqmfSpec() {
  PqmfSpec spec;
  spec.num_bands = kPqmfBands;
  spec.prototype_taps = KaiserLowpass(kPqmfTaps, kPqmfCutoff, kPqmfBeta);
  return spec;
}

namespace {

// Cosine-modulated analysis (sign = +1) or synthesis (sign = -1) filters.
std::vector<std::vector<double>> ModulatedFilters(const PqmfSpec& spec,
                                                  double sign) {
  const std::size_t bands = spec.num_bands;
  const std::size_t taps = spec.prototype_taps.size();
  const double center = 0.5 * static_cast<double>(taps - 1);
  std::vector<std::vector<double>> filters(bands, std::vector<double>(taps));
  for (std::size_t k = 0; k < bands; ++k) {
    const double phase =
        sign * ((k % 2 == 0) ? 1.0 : -1.0) * std::numbers::pi / 4.0;
    const double freq = (2.0 * static_cast<double>(k) + 1.0) *
                        std::numbers::pi / (2.0 * static_cast<double>(bands));
    for (std::size_t n = 0; n < taps; ++n) {
      filters[k][n] = 2.0 * spec.prototype_taps[n] *
                      std::cos(freq * (static_cast<double>(n) - center) + phase);
    }
  }
  return filters;
}

void CheckPqmfSpec(const PqmfSpec& spec) {
  Require(spec.num_bands >= 2, ErrorCode::kConfig, "PQMF needs >= 2 bands");
  Require(spec.prototype_taps.size() % 2 == 1, ErrorCode::kConfig,
          "PQMF prototype must have an odd number of taps");
}

}  // namespace

std::vector<SampleBuffer> pqmf_analyze(const SampleBuffer& input,
                                       const PqmfSpec& spec) {
  CheckPqmfSpec(spec);
  const std::size_t bands = spec.num_bands;
  Require(input.size() % bands == 0, ErrorCode::kInvalidArgument,
          "PQMF input length " + std::to_string(input.size()) +
              " is not a multiple of " + std::to_string(bands));
  const auto filters = ModulatedFilters(spec, 1.0);
  const std::ptrdiff_t taps = static_cast<std::ptrdiff_t>(spec.prototype_taps.size());
  const std::ptrdiff_t half = taps / 2;
  const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(input.size());
  const std::size_t out_len = input.size() / bands;
  const int rate = input.sample_rate / static_cast<int>(bands);

  std::vector<SampleBuffer> out(bands, SampleBuffer(rate, out_len));
  for (std::size_t m = 0; m < out_len; ++m) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m * bands) + half;
    const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, n - len + 1);
    const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(taps - 1, n);
    for (std::size_t k = 0; k < bands; ++k) {
      double acc = 0.0;
      for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j) {
        acc += filters[k][static_cast<std::size_t>(j)] * input.samples[static_cast<std::size_t>(n - j)];
      }
      out[k].samples[m] = acc;
    }
  }
  return out;
}

SampleBuffer pqmf_synthesize(std::span<const SampleBuffer> bands,
                             const PqmfSpec& spec) {
  CheckPqmfSpec(spec);
  Require(bands.size() == spec.num_bands, ErrorCode::kInvalidArgument,
          "PQMF synthesis expects " + std::to_string(spec.num_bands) + " bands");
  const std::size_t band_len = bands[0].size();
  for (const auto& b : bands) {
    Require(b.size() == band_len, ErrorCode::kInvalidArgument,
            "PQMF synthesis band lengths differ");
  }
  const auto filters = ModulatedFilters(spec, -1.0);
  const std::size_t num_bands = spec.num_bands;
  const std::ptrdiff_t taps = static_cast<std::ptrdiff_t>(spec.prototype_taps.size());
  const std::ptrdiff_t half = taps / 2;
  const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(band_len * num_bands);
  const double gain = static_cast<double>(num_bands);

  SampleBuffer out(bands[0].sample_rate * static_cast<int>(num_bands),
                   static_cast<std::size_t>(len));
  for (std::ptrdiff_t n = 0; n < len; ++n) {
    // Upsampled input is nonzero only at multiples of num_bands.
    const std::ptrdiff_t idx = n + half;
    double acc = 0.0;
    const std::ptrdiff_t j_first = idx % static_cast<std::ptrdiff_t>(num_bands);
    for (std::ptrdiff_t j = j_first; j < taps; j += static_cast<std::ptrdiff_t>(num_bands)) {
      const std::ptrdiff_t up = idx - j;
      if (up < 0) break;
      if (up >= len) continue;
      const std::size_t m = static_cast<std::size_t>(up) / num_bands;
      for (std::size_t k = 0; k < num_bands; ++k) {
        acc += filters[k][static_cast<std::size_t>(j)] * bands[k].samples[m];
      }
    }
    out.samples[static_cast<std::size_t>(n)] = gain * acc;
  }
  return out;
}

}  // namespace swbcodec
