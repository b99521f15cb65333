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

#include "swbcodec/loss.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "swbcodec/architectures.h"
#include "swbcodec/error.h"
#include "swbcodec/filterbank.h"

namespace swbcodec {
namespace {

void RequireSameLength(const SampleBuffer& ref, const SampleBuffer& est, std::size_t min_len) {
  Require(ref.size() == est.size(), ErrorCode::kShape,
          "length mismatch: ref " + std::to_string(ref.size()) + " vs est " +
              std::to_string(est.size()));
  Require(ref.size() >= min_len, ErrorCode::kInvalidArgument,
          "signals of " + std::to_string(ref.size()) + " samples are shorter than " +
              std::to_string(min_len));
}

std::size_t MaxOf(std::span<const std::size_t> v) {
  return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}

void RequireSameShape(const nn::Tensor& a, const nn::Tensor& b, const std::string& what) {
  Require(a.shape == b.shape, ErrorCode::kCongruence, what + " shapes differ");
}

double MeanAbsDiff(const nn::Tensor& a, const nn::Tensor& b) {
  if (a.data.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    acc += std::abs(static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]));
  }
  return acc / static_cast<double>(a.data.size());
}

double MeanSquaredOffset(const nn::Tensor& t, double target) {
  if (t.data.empty()) return 0.0;
  double acc = 0.0;
  for (float v : t.data) acc += (v - target) * (v - target);
  return acc / static_cast<double>(t.data.size());
}

}  // namespace

void LossWeights::Validate() const {
  Require(lambda_pe >= 0 && lambda_adv >= 0 && lambda_f >= 0 && lambda_g >= 0 && lambda_d >= 0,
          ErrorCode::kConfig, "loss weights must be non-negative");
  Require(valley_power < 0.0, ErrorCode::kConfig, "valley exponent must be negative");
  Require(valley_floor > 0.0, ErrorCode::kConfig, "valley floor must be positive");
}

double SpectralDistance(const Matrix& ref, const Matrix& est) {
  Require(ref.rows == est.rows && ref.cols == est.cols, ErrorCode::kShape,
          "spectrogram shapes differ");
  if (ref.data.empty()) return 0.0;
  double log_acc = 0.0, diff2 = 0.0, est2 = 0.0;
  for (std::size_t i = 0; i < ref.data.size(); ++i) {
    const double x = ref.data[i], y = est.data[i];
    log_acc += std::abs(std::log(std::max(x, kMagnitudeFloor)) -
                        std::log(std::max(y, kMagnitudeFloor)));
    diff2 += (x - y) * (x - y);
    est2 += y * y;
  }
  const double sc = std::sqrt(diff2) / std::max(std::sqrt(est2), kMagnitudeFloor);
  return log_acc / static_cast<double>(ref.data.size()) + sc;
}

double mrstft_loss(const SampleBuffer& ref, const SampleBuffer& est,
                   std::span<const std::size_t> fft_sizes) {
  RequireSameLength(ref, est, MaxOf(fft_sizes));
  double total = 0.0;
  for (std::size_t fft : fft_sizes) {
    const auto cfg = StftConfig::Hann(fft);
    total += SpectralDistance(stft_magnitude(ref.view(), cfg), stft_magnitude(est.view(), cfg));
  }
  return total;
}

std::vector<double> subband_mrstft_per_band(const SampleBuffer& ref, const SampleBuffer& est) {
  const PqmfSpec spec = DefaultPqmfSpec();
  RequireSameLength(ref, est, MaxOf(kSubbandFftSizes) * spec.num_bands);
  const std::size_t len = ref.size() - ref.size() % spec.num_bands;
  auto trimmed = [len](const SampleBuffer& x) {
    return SampleBuffer(x.sample_rate, std::vector<double>(x.samples.begin(),
                                                           x.samples.begin() + static_cast<std::ptrdiff_t>(len)));
  };
  const auto ref_bands = pqmf_analyze(trimmed(ref), spec);
  const auto est_bands = pqmf_analyze(trimmed(est), spec);
  std::vector<double> out(spec.num_bands);
  for (std::size_t b = 0; b < spec.num_bands; ++b) {
    out[b] = mrstft_loss(ref_bands[b], est_bands[b], kSubbandFftSizes);
  }
  return out;
}

double subband_mrstft_loss(const SampleBuffer& ref, const SampleBuffer& est) {
  double total = 0.0;
  for (double v : subband_mrstft_per_band(ref, est)) total += v;
  return total;
}

std::uint8_t VadMask::AtCentre(double centre_sample) const {
  if (values.empty()) return 0;
  const double j = std::round((centre_sample - fft_size / 2.0) / static_cast<double>(hop_size));
  const auto idx = static_cast<std::size_t>(std::clamp(j, 0.0, static_cast<double>(values.size() - 1)));
  return values[idx];
}

std::vector<double> FrameEnergyDb(const SampleBuffer& x, const VadConfig& cfg) {
  const auto stft = StftConfig::Hann(cfg.fft_size, cfg.hop_size);
  if (x.size() < cfg.fft_size) return {};
  double wsum = 0.0;
  for (double w : stft.window) wsum += w * w;
  const std::size_t frames = StftFrameCount(x.size(), stft);
  std::vector<double> out(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < cfg.fft_size; ++i) {
      const double v = stft.window[i] * x.samples[t * cfg.hop_size + i];
      acc += v * v;
    }
    out[t] = std::max(PowerToDb(acc / wsum), cfg.min_energy_db);
  }
  return out;
}

VadMask vad_mask(const SampleBuffer& ref, const VadConfig& cfg) {
  VadMask mask;
  mask.fft_size = cfg.fft_size;
  mask.hop_size = cfg.hop_size;
  const auto energy = FrameEnergyDb(ref, cfg);
  const double rise = cfg.floor_rise_db_per_s * static_cast<double>(cfg.hop_size) /
                      static_cast<double>(ref.sample_rate);
  double floor_db = cfg.initial_floor_db;
  mask.values.resize(energy.size());
  for (std::size_t t = 0; t < energy.size(); ++t) {
    floor_db = std::min(energy[t], floor_db + rise);
    mask.values[t] = energy[t] > floor_db + cfg.margin_db ? 1 : 0;
  }
  return mask;
}

double ValleyTerm(const Matrix& ref, const Matrix& est, std::span<const std::uint8_t> frame_mask,
                  const LossWeights& w) {
  Require(ref.rows == est.rows && ref.cols == est.cols, ErrorCode::kShape,
          "spectrogram shapes differ");
  Require(frame_mask.size() == ref.rows, ErrorCode::kShape, "mask length differs from frame count");
  if (ref.data.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t t = 0; t < ref.rows; ++t) {
    if (!frame_mask[t]) continue;
    for (std::size_t k = 0; k < ref.cols; ++k) {
      const double s = ref.at(t, k);
      acc += std::pow(std::max(s, w.valley_floor), w.valley_power) * std::abs(s - est.at(t, k));
    }
  }
  return acc / static_cast<double>(ref.data.size());
}

PmLoss pm_loss_components(const SampleBuffer& ref, const SampleBuffer& est, const LossWeights& w) {
  w.Validate();
  RequireSameLength(ref, est, MaxOf(kFullbandFftSizes));
  PmLoss out;
  const auto erb_cfg = StftConfig::Hann(kPmErbFft);
  const auto erb = erb_matrix(kPmErbFft, ref.sample_rate, kPmErbBands);
  out.spectral = SpectralDistance(erb_spectra(stft_magnitude(ref.view(), erb_cfg), erb),
                                  erb_spectra(stft_magnitude(est.view(), erb_cfg), erb));

  const VadMask vad = vad_mask(ref);
  for (std::size_t fft : kFullbandFftSizes) {
    const auto cfg = StftConfig::Hann(fft);
    const Matrix s = stft_magnitude(ref.view(), cfg);
    const Matrix s_hat = stft_magnitude(est.view(), cfg);
    std::vector<std::uint8_t> m(s.rows);
    for (std::size_t t = 0; t < s.rows; ++t) {
      m[t] = vad.AtCentre(static_cast<double>(t * cfg.hop_size) + fft / 2.0);
    }
    out.valley += ValleyTerm(s, s_hat, m, w);
  }
  return out;
}

double pm_loss(const SampleBuffer& ref, const SampleBuffer& est, const LossWeights& w) {
  return pm_loss_components(ref, est, w).total();
}

std::size_t DiscriminatorSpec::max_scale() const { return MaxOf(scales); }

std::vector<nn::ModelArchitecture> DiscriminatorArchitectures(const DiscriminatorSpec& spec) {
  std::vector<nn::ModelArchitecture> out;
  for (std::size_t k : spec.scales) out.push_back(DiscriminatorArchitecture(k));
  return out;
}

std::vector<nn::ModelWeights> RandomDiscriminatorWeights(const DiscriminatorSpec& spec,
                                                         std::uint64_t seed) {
  std::vector<nn::ModelWeights> out;
  const auto archs = DiscriminatorArchitectures(spec);
  for (std::size_t i = 0; i < archs.size(); ++i) out.push_back(nn::RandomWeights(archs[i], seed + i));
  return out;
}

std::vector<nn::ModelWeights> ZeroDiscriminatorWeights(const DiscriminatorSpec& spec) {
  std::vector<nn::ModelWeights> out;
  for (const auto& arch : DiscriminatorArchitectures(spec)) out.push_back(nn::ZeroWeights(arch));
  return out;
}

nn::Tensor DiscriminatorInput(const SampleBuffer& x, std::size_t scale) {
  const auto cfg = StftConfig::Hann(scale);
  const Matrix mag = stft_magnitude(x.view(), cfg);
  nn::Tensor t({2, mag.cols, mag.rows});
  for (std::size_t f = 0; f < mag.cols; ++f) {
    for (std::size_t n = 0; n < mag.rows; ++n) {
      const double m = mag.at(n, f);
      t.data[f * mag.rows + n] = static_cast<float>(m);
      t.data[(mag.cols + f) * mag.rows + n] =
          static_cast<float>(std::log(std::max(m, kMagnitudeFloor)));
    }
  }
  return t;
}

DiscriminatorOutput discriminator_forward(const SampleBuffer& x, const DiscriminatorSpec& spec,
                                          std::span<const nn::ModelWeights> weights) {
  Require(weights.size() == spec.scales.size(), ErrorCode::kWeightsIncompatible,
          "need one weight set per discriminator scale");
  Require(x.size() >= spec.max_scale(), ErrorCode::kInvalidArgument,
          "input of " + std::to_string(x.size()) + " samples is shorter than the largest scale " +
              std::to_string(spec.max_scale()));
  DiscriminatorOutput out;
  for (std::size_t s = 0; s < spec.scales.size(); ++s) {
    auto result = nn::forward(DiscriminatorArchitecture(spec.scales[s]), weights[s],
                              DiscriminatorInput(x, spec.scales[s]));
    out.patches.push_back(std::move(result.output));
    out.taps.push_back(std::move(result.taps));
  }
  return out;
}

AdversarialLosses adversarial_losses(std::span<const nn::Tensor> patch_real,
                                     std::span<const nn::Tensor> patch_fake) {
  Require(patch_real.size() == patch_fake.size() && !patch_fake.empty(), ErrorCode::kShape,
          "real and fake patch lists differ in scale count");
  AdversarialLosses out;
  for (std::size_t s = 0; s < patch_fake.size(); ++s) {
    Require(patch_real[s].shape == patch_fake[s].shape, ErrorCode::kShape,
            "patch shapes differ at scale " + std::to_string(s));
    out.generator += MeanSquaredOffset(patch_fake[s], 1.0);
    out.discriminator += MeanSquaredOffset(patch_real[s], 1.0) + MeanSquaredOffset(patch_fake[s], 0.0);
  }
  const auto scales = static_cast<double>(patch_fake.size());
  out.generator /= scales;
  out.discriminator /= scales;
  return out;
}

double feature_match_loss(std::span<const std::vector<nn::Tensor>> taps_real,
                          std::span<const std::vector<nn::Tensor>> taps_fake) {
  Require(taps_real.size() == taps_fake.size() && !taps_real.empty(), ErrorCode::kCongruence,
          "tap lists differ in scale count");
  double total = 0.0;
  for (std::size_t s = 0; s < taps_real.size(); ++s) {
    Require(taps_real[s].size() == taps_fake[s].size() && !taps_real[s].empty(),
            ErrorCode::kCongruence, "tap lists differ in layer count at scale " + std::to_string(s));
    double scale_sum = 0.0;
    for (std::size_t l = 0; l < taps_real[s].size(); ++l) {
      RequireSameShape(taps_real[s][l], taps_fake[s][l],
                       "scale " + std::to_string(s) + " layer " + std::to_string(l));
      scale_sum += MeanAbsDiff(taps_real[s][l], taps_fake[s][l]);
    }
    total += scale_sum / static_cast<double>(taps_real[s].size());
  }
  return total / static_cast<double>(taps_real.size());
}

double total_generator_loss(const GeneratorLossComponents& c, const LossWeights& w) {
  w.Validate();
  const std::pair<const char*, double> terms[] = {
      {"mrstft", c.mrstft}, {"subband", c.subband}, {"pm", c.pm},
      {"adversarial", c.adversarial}, {"feature_match", c.feature_match}};
  for (const auto& [name, v] : terms) {
    Require(std::isfinite(v), ErrorCode::kPoisonedLoss,
            std::string("non-finite loss term '") + name + "'");
  }
  return c.mrstft + c.subband + w.lambda_pe * c.pm + w.lambda_adv * c.adversarial +
         w.lambda_f * c.feature_match;
}

double kd_loss(const KdTaps& teacher, const KdTaps& student, const LossWeights& w) {
  w.Validate();
  auto side = [](const std::vector<nn::Tensor>& t, const std::vector<nn::Tensor>& s,
                 const char* name) {
    Require(t.size() == s.size(), ErrorCode::kCongruence,
            std::string(name) + " tap count differs: teacher " + std::to_string(t.size()) +
                ", student " + std::to_string(s.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      RequireSameShape(t[i], s[i], std::string(name) + " tap " + std::to_string(i));
      sum += MeanAbsDiff(t[i], s[i]);
    }
    return sum;
  };
  return w.lambda_g * side(teacher.generator, student.generator, "generator") +
         w.lambda_d * side(teacher.discriminator, student.discriminator, "discriminator");
}

std::uint64_t PairHash(const SampleBuffer& ref, const SampleBuffer& est) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const SampleBuffer& x) {
    for (double v : x.samples) {
      const float f = static_cast<float>(v);
      std::uint32_t bits;
      std::memcpy(&bits, &f, sizeof bits);
      for (int i = 0; i < 4; ++i) {
        h ^= (bits >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ULL;
      }
    }
  };
  feed(ref);
  feed(est);
  return h;
}

std::vector<GoldenRecord> ComputeGoldenRecords(const SampleBuffer& ref, const SampleBuffer& est,
                                               const LossWeights& w) {
  const std::uint64_t h = PairHash(ref, est);
  const PmLoss pm = pm_loss_components(ref, est, w);
  return {{h, "mrstft", mrstft_loss(ref, est)},
          {h, "subband_mrstft", subband_mrstft_loss(ref, est)},
          {h, "pm", pm.total()},
          {h, "pm_spectral", pm.spectral},
          {h, "pm_valley", pm.valley}};
}

void WriteGoldens(std::ostream& out, std::span<const GoldenRecord> records) {
  out << "# pair_hash name value\n";
  for (const auto& r : records) {
    out << std::hex << std::setw(16) << std::setfill('0') << r.pair_hash << std::dec << ' '
        << r.name << ' ' << std::setprecision(17) << r.value << '\n';
  }
}

std::vector<GoldenRecord> ParseGoldens(std::istream& in) {
  std::vector<GoldenRecord> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string hash, name, value, extra;
    ls >> hash >> name >> value;
    const std::string where = "goldens line " + std::to_string(lineno) + ": ";
    Require(!value.empty() && !(ls >> extra), ErrorCode::kFormat, where + "expected 3 fields");
    Require(hash.size() == 16 && hash.find_first_not_of("0123456789abcdefABCDEF") == std::string::npos,
            ErrorCode::kFormat, where + "hash must be 16 hex digits");
    GoldenRecord r;
    r.pair_hash = std::stoull(hash, nullptr, 16);
    r.name = name;
    std::size_t used = 0;
    try {
      r.value = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    Require(used == value.size(), ErrorCode::kFormat, where + "bad value '" + value + "'");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GoldenMismatch> CheckGoldens(std::span<const GoldenRecord> expected,
                                         std::span<const GoldenRecord> actual, double rel_tol) {
  std::map<std::pair<std::uint64_t, std::string>, double> lookup;
  for (const auto& r : actual) lookup[{r.pair_hash, r.name}] = r.value;
  std::vector<GoldenMismatch> out;
  for (const auto& e : expected) {
    const auto it = lookup.find({e.pair_hash, e.name});
    if (it == lookup.end()) {
      out.push_back({e, std::nan("")});
      continue;
    }
    const double scale = std::max(std::abs(e.value), 1e-12);
    if (!(std::abs(it->second - e.value) <= rel_tol * scale)) out.push_back({e, it->second});
  }
  return out;
}

}  // namespace swbcodec
