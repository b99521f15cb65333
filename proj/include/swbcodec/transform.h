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

#ifndef SWBCODEC_TRANSFORM_H_
#define SWBCODEC_TRANSFORM_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace swbcodec {

// Dense row-major matrix; STFT magnitudes are [frames x bins].
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

// Real-input DFT of size in.size(); out must hold n/2 + 1 bins.
void RealDft(std::span<const double> in, std::span<std::complex<double>> out);
// Inverse of RealDft, unnormalized (result is n times the signal).
void InverseRealDft(std::span<const std::complex<double>> in,
                    std::span<double> out);
// DCT-IV: out[k] = sum_n in[n] cos(pi/N (n + 1/2)(k + 1/2)).
void DctIv(std::span<const double> in, std::span<double> out);

std::vector<double> PeriodicHann(std::size_t length);

struct StftConfig {
  std::size_t fft_size = 512;
  std::size_t hop_size = 128;
  std::vector<double> window;

  // Periodic Hann with the given hop (fft/4 when hop is 0).
  static StftConfig Hann(std::size_t fft_size, std::size_t hop_size = 0);
};

std::size_t StftFrameCount(std::size_t length, const StftConfig& cfg);

// |DFT(window * frame)| with no padding; frames start at multiples of hop.
Matrix stft_magnitude(std::span<const double> input, const StftConfig& cfg);

// Magnitudes at several resolutions of the same signal.
struct SpectrumSet {
  std::vector<StftConfig> configs;
  std::vector<Matrix> magnitudes;
};

SpectrumSet ComputeSpectrumSet(std::span<const double> input,
                               std::span<const std::size_t> fft_sizes);

// Sine window of length 2N; satisfies w[n]^2 + w[n+N]^2 = 1.
std::vector<double> SineWindow(std::size_t half_length);

struct MdctFrame {
  std::vector<double> coeffs;
  std::size_t frame_index = 0;
};

// Orthonormal sine-windowed MDCT of one 2N-sample block into N coefficients.
void MdctBlock(std::span<const double> block, std::span<double> coeffs);
// Windowed inverse of MdctBlock; overlap-adding consecutive outputs at hop N
// cancels the time-domain aliasing.
void ImdctBlock(std::span<const double> coeffs, std::span<double> block);

// Frame j covers input[jN, jN + 2N); a length-L input yields L/N - 1 frames.
std::vector<MdctFrame> mdct(std::span<const double> input, std::size_t half_window);

struct ImdctResult {
  // (frames + 1) * N samples.
  std::vector<double> samples;
  // Samples outside [valid_begin, valid_end) are covered by a single frame
  // and carry uncancelled aliasing.
  std::size_t valid_begin = 0;
  std::size_t valid_end = 0;
};

ImdctResult imdct(std::span<const MdctFrame> frames, std::size_t half_window);

// Glasberg & Moore ERB-rate scale.
double HzToErbRate(double hz);
double ErbRateToHz(double erb_rate);

struct ErbMatrix {
  // [bands x (fft_size/2 + 1)], each row sums to 1.
  Matrix weights;
  // num_bands + 2 edge frequencies; band b spans edges[b]..edges[b+2] and
  // peaks at edges[b+1].
  std::vector<double> band_edges_hz;
  std::size_t fft_size = 0;
  int sample_rate = 0;

  std::size_t num_bands() const { return weights.rows; }
  double center_hz(std::size_t band) const { return band_edges_hz[band + 1]; }
};

ErbMatrix erb_matrix(std::size_t fft_size, int sample_rate, std::size_t num_bands);

// Band RMS: sqrt(mag^2 * weights^T), [frames x bands].
Matrix erb_spectra(const Matrix& magnitude, const ErbMatrix& erb);

// Lag (in samples) maximizing the cross-correlation of `ref` and `deg`:
// deg[n] ~ ref[n - lag]. Searches |lag| <= max_lag.
std::ptrdiff_t EstimateDelay(std::span<const double> ref,
                             std::span<const double> deg, std::size_t max_lag);

}  // namespace swbcodec

#endif  // SWBCODEC_TRANSFORM_H_
