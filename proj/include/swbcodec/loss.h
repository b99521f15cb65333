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

#ifndef SWBCODEC_LOSS_H_
#define SWBCODEC_LOSS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "swbcodec/audio.h"
#include "swbcodec/nn.h"
#include "swbcodec/transform.h"

namespace swbcodec {

struct LossWeights {
  double lambda_pe = 2.0;
  double lambda_adv = 1.0;
  double lambda_f = 20.0;
  double lambda_g = 30.0;
  double lambda_d = 10.0;
  // Valley compression exponent and the spectrum floor applied before it.
  double valley_power = -0.5;
  double valley_floor = 1e-5;

  void Validate() const;
};

inline constexpr double kMagnitudeFloor = 1e-7;
inline constexpr std::array<std::size_t, 3> kFullbandFftSizes = {512, 1024, 2048};
inline constexpr std::array<std::size_t, 3> kSubbandFftSizes = {128, 256, 512};

// mean|log X - log X^| + ||X - X^||_F / ||X^||_F over one magnitude pair,
// magnitudes floored at 1e-7 before the log.
double SpectralDistance(const Matrix& ref, const Matrix& est);

// Sum of SpectralDistance over STFT resolutions (Hann, hop fft/4).
double mrstft_loss(const SampleBuffer& ref, const SampleBuffer& est,
                   std::span<const std::size_t> fft_sizes = kFullbandFftSizes);

// 4-band PQMF split, per-band mrstft_loss at the quartered resolutions.
// Lengths are truncated to a multiple of 4 first.
std::vector<double> subband_mrstft_per_band(const SampleBuffer& ref, const SampleBuffer& est);
double subband_mrstft_loss(const SampleBuffer& ref, const SampleBuffer& est);

// Frame energy against a tracked noise floor on the FFT-512 / hop-128 grid.
// The floor starts low and can only rise slowly, so sustained signals stay
// active while any quieter stretch pulls the floor down at once.
struct VadConfig {
  std::size_t fft_size = 512;
  std::size_t hop_size = 128;
  double margin_db = 10.0;
  double initial_floor_db = -60.0;
  double floor_rise_db_per_s = 3.0;
  double min_energy_db = -100.0;
};

struct VadMask {
  std::vector<std::uint8_t> values;
  std::size_t fft_size = 512;
  std::size_t hop_size = 128;

  std::size_t size() const { return values.size(); }
  // Mask value for a frame of another STFT grid, matched by frame centre.
  std::uint8_t AtCentre(double centre_sample) const;
};

std::vector<double> FrameEnergyDb(const SampleBuffer& x, const VadConfig& cfg = {});
VadMask vad_mask(const SampleBuffer& ref, const VadConfig& cfg = {});

// mean over (frame, bin) of M * max(S, floor)^p * |S - S^|.
double ValleyTerm(const Matrix& ref, const Matrix& est, std::span<const std::uint8_t> frame_mask,
                  const LossWeights& w);

inline constexpr std::size_t kPmErbFft = 1024;
inline constexpr std::size_t kPmErbBands = 64;

struct PmLoss {
  double spectral = 0.0;  // on ERB spectra
  double valley = 0.0;
  double total() const { return spectral + valley; }
};

PmLoss pm_loss_components(const SampleBuffer& ref, const SampleBuffer& est,
                          const LossWeights& w = {});
double pm_loss(const SampleBuffer& ref, const SampleBuffer& est, const LossWeights& w = {});

// Multi-resolution STFT patch discriminator.
struct DiscriminatorSpec {
  std::vector<std::size_t> scales = {60, 120, 240, 480, 960, 1920};

  std::size_t hop(std::size_t scale) const { return scale / 4; }
  std::size_t max_scale() const;
};

std::vector<nn::ModelArchitecture> DiscriminatorArchitectures(const DiscriminatorSpec& spec);
std::vector<nn::ModelWeights> RandomDiscriminatorWeights(const DiscriminatorSpec& spec,
                                                         std::uint64_t seed);
std::vector<nn::ModelWeights> ZeroDiscriminatorWeights(const DiscriminatorSpec& spec);

// (2, bins, frames): magnitude and floored log-magnitude.
nn::Tensor DiscriminatorInput(const SampleBuffer& x, std::size_t scale);

struct DiscriminatorOutput {
  std::vector<nn::Tensor> patches;             // per scale
  std::vector<std::vector<nn::Tensor>> taps;   // per scale, 7 layer outputs
};

DiscriminatorOutput discriminator_forward(const SampleBuffer& x, const DiscriminatorSpec& spec,
                                          std::span<const nn::ModelWeights> weights);

struct AdversarialLosses {
  double generator = 0.0;      // L_adv
  double discriminator = 0.0;  // L_D
};

// LS-GAN; each scale's patch mean contributes equally.
AdversarialLosses adversarial_losses(std::span<const nn::Tensor> patch_real,
                                     std::span<const nn::Tensor> patch_fake);

// Mean over scales of (1/L) sum_l mean|real_l - fake_l|.
double feature_match_loss(std::span<const std::vector<nn::Tensor>> taps_real,
                          std::span<const std::vector<nn::Tensor>> taps_fake);

struct GeneratorLossComponents {
  double mrstft = 0.0;
  double subband = 0.0;
  double pm = 0.0;
  double adversarial = 0.0;
  double feature_match = 0.0;
};

double total_generator_loss(const GeneratorLossComponents& c, const LossWeights& w = {});

struct KdTaps {
  std::vector<nn::Tensor> generator;
  std::vector<nn::Tensor> discriminator;
};

// lambda_G sum_i mean|teacher_i - student_i| over generator taps plus
// lambda_D times the same over discriminator taps.
double kd_loss(const KdTaps& teacher, const KdTaps& student, const LossWeights& w = {});

// Cross-implementation parity records: one "<hash> <name> <value>" line each.
struct GoldenRecord {
  std::uint64_t pair_hash = 0;
  std::string name;
  double value = 0.0;
};

// FNV-1a 64 over the float32 little-endian samples of ref, then est.
std::uint64_t PairHash(const SampleBuffer& ref, const SampleBuffer& est);
std::vector<GoldenRecord> ComputeGoldenRecords(const SampleBuffer& ref, const SampleBuffer& est,
                                               const LossWeights& w = {});
void WriteGoldens(std::ostream& out, std::span<const GoldenRecord> records);
std::vector<GoldenRecord> ParseGoldens(std::istream& in);

struct GoldenMismatch {
  GoldenRecord expected;
  double actual = 0.0;
};

// Compares recorded values with freshly computed ones within `rel_tol`
// relative (absolute below 1e-12).
std::vector<GoldenMismatch> CheckGoldens(std::span<const GoldenRecord> expected,
                                         std::span<const GoldenRecord> actual, double rel_tol);

}  // namespace swbcodec

#endif  // SWBCODEC_LOSS_H_
