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

#include "swbcodec/transform.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "swbcodec/error.h"

namespace swbcodec {
namespace {

enum class PlanKind { kR2c, kC2r, kDctIv };

// FFTW planning is not thread-safe, execution with new arrays is. Plans are
// created once per (kind, size) under a lock and never destroyed.
class PlanCache {
 public:
  static PlanCache& Instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan Get(PlanKind kind, std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    double* real = fftw_alloc_real(n);
    fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
    double* real_out = fftw_alloc_real(n);
    fftw_plan plan = nullptr;
    switch (kind) {
      case PlanKind::kR2c:
        plan = fftw_plan_dft_r2c_1d(size, real, cplx, flags);
        break;
      case PlanKind::kC2r:
        plan = fftw_plan_dft_c2r_1d(size, cplx, real, flags);
        break;
      case PlanKind::kDctIv:
        plan = fftw_plan_r2r_1d(size, real, real_out, FFTW_REDFT11, flags);
        break;
    }
    fftw_free(real);
    fftw_free(cplx);
    fftw_free(real_out);
    Require(plan != nullptr, ErrorCode::kConfig,
            "FFTW could not plan a transform of size " + std::to_string(n));
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<PlanKind, std::size_t>, fftw_plan> plans_;
};

}  // namespace

void RealDft(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  Require(n > 0 && out.size() == n / 2 + 1, ErrorCode::kShape,
          "RealDft output must hold n/2 + 1 bins");
  fftw_plan plan = PlanCache::Instance().Get(PlanKind::kR2c, n);
  std::vector<double> scratch(in.begin(), in.end());
  fftw_execute_dft_r2c(plan, scratch.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void InverseRealDft(std::span<const std::complex<double>> in,
                    std::span<double> out) {
  const std::size_t n = out.size();
  Require(n > 0 && in.size() == n / 2 + 1, ErrorCode::kShape,
          "InverseRealDft input must hold n/2 + 1 bins");
  fftw_plan plan = PlanCache::Instance().Get(PlanKind::kC2r, n);
  // c2r destroys its input.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
}

void DctIv(std::span<const double> in, std::span<double> out) {
  const std::size_t n = in.size();
  Require(n > 0 && out.size() == n, ErrorCode::kShape, "DctIv size mismatch");
  fftw_plan plan = PlanCache::Instance().Get(PlanKind::kDctIv, n);
  std::vector<double> scratch(in.begin(), in.end());
  fftw_execute_r2r(plan, scratch.data(), out.data());
  // FFTW's REDFT11 carries a factor of 2.
  for (double& v : out) v *= 0.5;
}

std::vector<double> PeriodicHann(std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                static_cast<double>(length));
  }
  return w;
}

StftConfig StftConfig::Hann(std::size_t fft_size, std::size_t hop_size) {
  StftConfig cfg;
  cfg.fft_size = fft_size;
  cfg.hop_size = hop_size == 0 ? fft_size / 4 : hop_size;
  cfg.window = PeriodicHann(fft_size);
  return cfg;
}

std::size_t StftFrameCount(std::size_t length, const StftConfig& cfg) {
  if (length < cfg.fft_size) return 0;
  return (length - cfg.fft_size) / cfg.hop_size + 1;
}

Matrix stft_magnitude(std::span<const double> input, const StftConfig& cfg) {
  Require(cfg.hop_size > 0 && cfg.hop_size <= cfg.fft_size, ErrorCode::kConfig,
          "STFT hop must be in [1, fft_size]");
  Require(cfg.window.size() == cfg.fft_size, ErrorCode::kConfig,
          "STFT window length must equal fft_size");
  Require(input.size() >= cfg.fft_size, ErrorCode::kInvalidArgument,
          "STFT input of " + std::to_string(input.size()) +
              " samples is shorter than fft_size " + std::to_string(cfg.fft_size));
  const std::size_t frames = StftFrameCount(input.size(), cfg);
  const std::size_t bins = cfg.fft_size / 2 + 1;
  Matrix mag(frames, bins);
  std::vector<double> frame(cfg.fft_size);
  std::vector<std::complex<double>> spec(bins);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* x = input.data() + t * cfg.hop_size;
    for (std::size_t n = 0; n < cfg.fft_size; ++n) frame[n] = cfg.window[n] * x[n];
    RealDft(frame, spec);
    auto row = mag.row(t);
    for (std::size_t k = 0; k < bins; ++k) row[k] = std::abs(spec[k]);
  }
  return mag;
}

SpectrumSet ComputeSpectrumSet(std::span<const double> input,
                               std::span<const std::size_t> fft_sizes) {
  SpectrumSet set;
  for (std::size_t fft : fft_sizes) {
    set.configs.push_back(StftConfig::Hann(fft));
    set.magnitudes.push_back(stft_magnitude(input, set.configs.back()));
  }
  return set;
}

std::vector<double> SineWindow(std::size_t half_length) {
  const std::size_t len = 2 * half_length;
  std::vector<double> w(len);
  for (std::size_t n = 0; n < len; ++n) {
    w[n] = std::sin(std::numbers::pi * (static_cast<double>(n) + 0.5) /
                    static_cast<double>(len));
  }
  return w;
}

void MdctBlock(std::span<const double> block, std::span<double> coeffs) {
  const std::size_t n = coeffs.size();
  Require(n > 0 && n % 2 == 0 && block.size() == 2 * n, ErrorCode::kShape,
          "MDCT block must be 2N samples with N even");
  const std::vector<double> w = SineWindow(n);
  const std::size_t h = n / 2;
  std::vector<double> folded(n);
  auto z = [&](std::size_t i) { return w[i] * block[i]; };
  for (std::size_t i = 0; i < h; ++i) {
    folded[i] = -z(3 * h - 1 - i) - z(3 * h + i);
  }
  for (std::size_t i = h; i < n; ++i) {
    folded[i] = z(i - h) - z(3 * h - 1 - i);
  }
  DctIv(folded, coeffs);
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  for (double& c : coeffs) c *= scale;
}

void ImdctBlock(std::span<const double> coeffs, std::span<double> block) {
  const std::size_t n = coeffs.size();
  Require(n > 0 && n % 2 == 0 && block.size() == 2 * n, ErrorCode::kShape,
          "IMDCT block must be 2N samples with N even");
  std::vector<double> v(n);
  DctIv(coeffs, v);
  const std::vector<double> w = SineWindow(n);
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  const std::size_t h = n / 2;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const std::size_t m = i + h;
    double y;
    if (m < n) {
      y = v[m];
    } else if (m < 2 * n) {
      y = -v[2 * n - 1 - m];
    } else {
      y = -v[m - 2 * n];
    }
    block[i] = scale * w[i] * y;
  }
}

std::vector<MdctFrame> mdct(std::span<const double> input, std::size_t half_window) {
  Require(half_window > 0 && half_window % 2 == 0, ErrorCode::kInvalidArgument,
          "MDCT half-window must be positive and even");
  Require(input.size() % half_window == 0, ErrorCode::kInvalidArgument,
          "MDCT input length " + std::to_string(input.size()) +
              " is not a multiple of " + std::to_string(half_window));
  std::vector<MdctFrame> frames;
  const std::size_t blocks = input.size() / half_window;
  if (blocks < 2) return frames;
  frames.reserve(blocks - 1);
  for (std::size_t j = 0; j + 1 < blocks; ++j) {
    MdctFrame f;
    f.frame_index = j;
    f.coeffs.resize(half_window);
    MdctBlock(input.subspan(j * half_window, 2 * half_window), f.coeffs);
    frames.push_back(std::move(f));
  }
  return frames;
}

ImdctResult imdct(std::span<const MdctFrame> frames, std::size_t half_window) {
  Require(frames.size() >= 2, ErrorCode::kInvalidArgument,
          "IMDCT needs at least two frames");
  for (const auto& f : frames) {
    Require(f.coeffs.size() == half_window, ErrorCode::kInvalidArgument,
            "IMDCT frame has " + std::to_string(f.coeffs.size()) +
                " coefficients, expected " + std::to_string(half_window));
  }
  ImdctResult result;
  result.samples.assign((frames.size() + 1) * half_window, 0.0);
  std::vector<double> block(2 * half_window);
  for (std::size_t j = 0; j < frames.size(); ++j) {
    ImdctBlock(frames[j].coeffs, block);
    double* dst = result.samples.data() + j * half_window;
    for (std::size_t i = 0; i < block.size(); ++i) dst[i] += block[i];
  }
  result.valid_begin = half_window;
  result.valid_end = frames.size() * half_window;
  return result;
}

double HzToErbRate(double hz) { return 21.4 * std::log10(1.0 + 0.00437 * hz); }

double ErbRateToHz(double erb_rate) {
  return (std::pow(10.0, erb_rate / 21.4) - 1.0) / 0.00437;
}

ErbMatrix erb_matrix(std::size_t fft_size, int sample_rate, std::size_t num_bands) {
  Require(num_bands >= 8, ErrorCode::kInvalidArgument,
          "ERB matrix needs at least 8 bands");
  const std::size_t bins = fft_size / 2 + 1;
  Require(num_bands <= bins, ErrorCode::kInvalidArgument,
          "ERB bands (" + std::to_string(num_bands) + ") exceed FFT bins (" +
              std::to_string(bins) + ")");
  ErbMatrix erb;
  erb.fft_size = fft_size;
  erb.sample_rate = sample_rate;
  erb.weights = Matrix(num_bands, bins);
  const double nyquist = 0.5 * sample_rate;
  const double top = HzToErbRate(nyquist);
  erb.band_edges_hz.resize(num_bands + 2);
  for (std::size_t i = 0; i < num_bands + 2; ++i) {
    erb.band_edges_hz[i] = ErbRateToHz(top * static_cast<double>(i) /
                                       static_cast<double>(num_bands + 1));
  }
  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(fft_size);
  for (std::size_t b = 0; b < num_bands; ++b) {
    const double lo = erb.band_edges_hz[b];
    const double center = erb.band_edges_hz[b + 1];
    const double hi = erb.band_edges_hz[b + 2];
    auto row = erb.weights.row(b);
    double sum = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = bin_hz * static_cast<double>(k);
      double v = 0.0;
      if (f > lo && f <= center) {
        v = (f - lo) / (center - lo);
      } else if (f > center && f < hi) {
        v = (hi - f) / (hi - center);
      }
      row[k] = v;
      sum += v;
    }
    if (sum <= 0.0) {
      // Band narrower than one bin: use the nearest bin.
      const auto k = std::min<std::size_t>(
          bins - 1, static_cast<std::size_t>(std::lround(center / bin_hz)));
      row[k] = 1.0;
      sum = 1.0;
    }
    for (double& v : row) v /= sum;
  }
  return erb;
}

Matrix erb_spectra(const Matrix& magnitude, const ErbMatrix& erb) {
  Require(magnitude.cols == erb.weights.cols, ErrorCode::kShape,
          "magnitude has " + std::to_string(magnitude.cols) +
              " bins, ERB matrix expects " + std::to_string(erb.weights.cols));
  const std::size_t bands = erb.weights.rows;
  Matrix out(magnitude.rows, bands);
  for (std::size_t t = 0; t < magnitude.rows; ++t) {
    const auto mag = magnitude.row(t);
    for (std::size_t b = 0; b < bands; ++b) {
      const auto w = erb.weights.row(b);
      double acc = 0.0;
      for (std::size_t k = 0; k < mag.size(); ++k) acc += w[k] * mag[k] * mag[k];
      out.at(t, b) = std::sqrt(acc);
    }
  }
  return out;
}

std::ptrdiff_t EstimateDelay(std::span<const double> ref,
                             std::span<const double> deg, std::size_t max_lag) {
  if (ref.empty() || deg.empty()) return 0;
  std::size_t n = 1;
  while (n < ref.size() + deg.size()) n <<= 1;
  std::vector<double> a(n, 0.0), b(n, 0.0);
  std::copy(ref.begin(), ref.end(), a.begin());
  std::copy(deg.begin(), deg.end(), b.begin());
  std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
  RealDft(a, fa);
  RealDft(b, fb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] = std::conj(fa[k]) * fb[k];
  std::vector<double> xc(n);
  InverseRealDft(fa, xc);
  // xc[lag mod n] = sum_m ref[m] deg[m + lag].
  std::ptrdiff_t best_lag = 0;
  double best = -std::numeric_limits<double>::infinity();
  const auto limit = static_cast<std::ptrdiff_t>(max_lag);
  for (std::ptrdiff_t lag = -limit; lag <= limit; ++lag) {
    const std::size_t idx = static_cast<std::size_t>(
        (lag % static_cast<std::ptrdiff_t>(n) + static_cast<std::ptrdiff_t>(n)) %
        static_cast<std::ptrdiff_t>(n));
    if (xc[idx] > best) {
      best = xc[idx];
      best_lag = lag;
    }
  }
  return best_lag;
}

}  // namespace swbcodec
