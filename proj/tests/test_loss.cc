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

#include <cmath>
#include <limits>
#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "support/oracles.h"
#include "support/signals.h"
#include "swbcodec/error.h"
#include "swbcodec/filterbank.h"
#include "swbcodec/loss.h"
#include "swbcodec/synth.h"

using namespace swbcodec;

namespace {

SampleBuffer Scaled(const SampleBuffer& x, double k) {
  SampleBuffer y = x;
  for (double& v : y.samples) v *= k;
  return y;
}

SampleBuffer Perturbed(const SampleBuffer& x, double rms, std::uint64_t seed) {
  SampleBuffer y = x;
  const auto n = signals::WhiteNoise(x.size(), seed, rms);
  for (std::size_t i = 0; i < y.size(); ++i) y.samples[i] += n[i];
  return y;
}

std::vector<nn::Tensor> Constant(const std::vector<std::vector<std::size_t>>& shapes, float v) {
  std::vector<nn::Tensor> out;
  for (const auto& s : shapes) out.emplace_back(s, v);
  return out;
}

std::vector<nn::Tensor> Plus(std::vector<nn::Tensor> t, float k) {
  for (auto& x : t) {
    for (float& v : x.data) v += k;
  }
  return t;
}

std::size_t StridedLength(std::size_t n, std::size_t stride) { return (n - 1) / stride + 1; }

}  // namespace

TEST_CASE("MR-STFT analytic values") {
  const auto x = signals::Buffer(16000, signals::WhiteNoise(16000, 1));
  CHECK(mrstft_loss(x, x) == 0.0);
  CHECK(mrstft_loss(x, Scaled(x, 2.0)) == Catch::Approx(3 * (std::log(2.0) + 0.5)).margin(1e-6));
  CHECK_THROWS_AS(mrstft_loss(x, signals::Buffer(16000, signals::WhiteNoise(15999, 1))), CodecError);
  CHECK_THROWS_AS(mrstft_loss(signals::Buffer(16000, signals::WhiteNoise(2047, 1)),
                              signals::Buffer(16000, signals::WhiteNoise(2047, 2))),
                  CodecError);
}

TEST_CASE("MR-STFT matches a dense-DFT oracle") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto ref = signals::Ar2(6000, seed, 0.9, -0.5);
    const auto est = signals::WhiteNoise(6000, seed + 50);
    const double got = mrstft_loss(signals::Buffer(16000, ref), signals::Buffer(16000, est));
    const double want = oracle::DenseMrstft(ref, est, kFullbandFftSizes);
    CHECK(got == Catch::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("Spectral convergence is normalized by the estimate") {
  const auto a = signals::Buffer(16000, signals::WhiteNoise(8000, 3));
  const auto b = signals::Buffer(16000, signals::Ar2(8000, 4, 0.5, 0.1));
  CHECK(mrstft_loss(a, b) != Catch::Approx(mrstft_loss(b, a)).epsilon(1e-6));
  CHECK(subband_mrstft_loss(a, b) != Catch::Approx(subband_mrstft_loss(b, a)).epsilon(1e-6));
}

TEST_CASE("Band-limited noise shows up in its own subband") {
  const PqmfSpec spec = DefaultPqmfSpec();
  const auto ref = signals::Buffer(32000, signals::Ar2(32000, 7, 1.2, -0.6));
  auto bands = pqmf_analyze(ref, spec);
  for (auto& b : bands) std::fill(b.samples.begin(), b.samples.end(), 0.0);
  bands[3].samples = signals::WhiteNoise(bands[3].size(), 8, 0.05);
  const SampleBuffer noise = pqmf_synthesize(bands, spec);
  SampleBuffer est = ref;
  for (std::size_t i = 0; i < est.size() && i < noise.size(); ++i) est.samples[i] += noise.samples[i];

  CHECK(subband_mrstft_loss(ref, ref) == 0.0);
  const auto per_band = subband_mrstft_per_band(ref, est);
  REQUIRE(per_band.size() == 4);
  for (int b = 0; b < 3; ++b) CHECK(per_band[3] >= 10.0 * per_band[b]);
  double sum = 0;
  for (double v : per_band) sum += v;
  CHECK(subband_mrstft_loss(ref, est) == Catch::Approx(sum).epsilon(1e-12));
}

TEST_CASE("VAD mask") {
  CHECK(vad_mask(SampleBuffer(16000, std::size_t{16000})).values == std::vector<std::uint8_t>(122, 0));

  const auto tone = signals::Buffer(16000, signals::Sine(48000, 440.0, 16000, 1.0));
  const VadMask m = vad_mask(tone);
  for (std::size_t t = 0; t < m.size(); ++t) CHECK(m.values[t] == 1);

  // 0.5 s tone / 0.5 s silence alternation; expected value by frame centre.
  const std::size_t seg = 8000;
  std::vector<double> x(6 * seg, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((i / seg) % 2 == 0) x[i] = 0.3 * std::sin(2 * M_PI * 300.0 * i / 16000);
  }
  const VadMask alt = vad_mask(signals::Buffer(16000, x));
  std::vector<double> edges;
  for (std::size_t k = 1; k < 6; ++k) edges.push_back((k * seg - 256.0) / 128.0);
  for (std::size_t t = 1; t < alt.size(); ++t) {
    if (alt.values[t] == alt.values[t - 1]) continue;
    double nearest = 1e9;
    for (double e : edges) nearest = std::min(nearest, std::abs(t - 0.5 - e));
    CHECK(nearest <= 2.0);
  }
  std::size_t transitions = 0;
  for (std::size_t t = 1; t < alt.size(); ++t) transitions += alt.values[t] != alt.values[t - 1];
  CHECK(transitions == edges.size());
  CHECK(alt.AtCentre(4000) == 1);
  CHECK(alt.AtCentre(12000) == 0);
}

TEST_CASE("PM loss") {
  const auto speech = MakeSyntheticSpeech(2.0, 16000, 5);
  CHECK(pm_loss(speech.audio, speech.audio) == 0.0);
  const auto noisy = Perturbed(speech.audio, 0.01, 6);
  const PmLoss c = pm_loss_components(speech.audio, noisy);
  CHECK(c.spectral > 0.0);
  CHECK(c.valley > 0.0);
  CHECK(pm_loss(speech.audio, noisy) == Catch::Approx(c.spectral + c.valley).epsilon(1e-12));
}

TEST_CASE("Valley weighting follows the power law") {
  const LossWeights w;
  Matrix ref(1, 2), est(1, 2);
  ref.at(0, 0) = 0.01;
  ref.at(0, 1) = 1.0;
  est = ref;
  const std::vector<std::uint8_t> on = {1};
  est.at(0, 0) += 0.001;
  const double low = ValleyTerm(ref, est, on, w);
  est = ref;
  est.at(0, 1) += 0.001;
  const double high = ValleyTerm(ref, est, on, w);
  CHECK(low / high == Catch::Approx(10.0).epsilon(1e-12));
  // Strictly decreasing weight as S grows.
  double prev = std::numeric_limits<double>::infinity();
  for (double s : {1e-4, 1e-3, 0.1, 1.0, 10.0}) {
    Matrix r(1, 1, s), e(1, 1, s + 1e-3);
    const double v = ValleyTerm(r, e, on, w);
    CHECK(v < prev);
    prev = v;
  }
  const std::vector<std::uint8_t> off = {0};
  CHECK(ValleyTerm(ref, est, off, w) == 0.0);
}

TEST_CASE("Silent frames contribute nothing to the valley term") {
  const SampleBuffer silence(16000, std::size_t{16000});
  const auto loud = signals::Buffer(16000, signals::WhiteNoise(16000, 2, 0.3));
  CHECK(pm_loss_components(silence, loud).valley == 0.0);
}

TEST_CASE("Losses are continuous and non-negative") {
  const auto speech = MakeSyntheticSpeech(1.0, 16000, 8);
  const auto est = Perturbed(speech.audio, 0.02, 3);
  const auto est2 = Perturbed(est, 1e-6, 4);
  CHECK(std::abs(mrstft_loss(speech.audio, est) - mrstft_loss(speech.audio, est2)) < 1e-3);
  CHECK(std::abs(pm_loss(speech.audio, est) - pm_loss(speech.audio, est2)) < 1e-3);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto a = signals::Buffer(16000, signals::WhiteNoise(4096, s));
    const auto b = signals::Buffer(16000, signals::Ar2(4096, s + 9, 0.4, 0.2));
    CHECK(mrstft_loss(a, b) >= 0.0);
    CHECK(subband_mrstft_loss(a, b) >= 0.0);
    CHECK(pm_loss(a, b) >= 0.0);
  }
}

TEST_CASE("Discriminator shapes follow the stride schedule") {
  const DiscriminatorSpec spec;
  const auto weights = RandomDiscriminatorWeights(spec, 3);
  const auto x = signals::Buffer(16000, signals::WhiteNoise(16000, 1));
  const auto out = discriminator_forward(x, spec, weights);
  REQUIRE(out.patches.size() == 6);
  REQUIRE(out.taps.size() == 6);
  const std::array<std::size_t, 7> strides = {1, 2, 1, 2, 1, 2, 1};
  const std::array<std::size_t, 7> channels = {16, 32, 64, 64, 64, 32, 1};
  for (std::size_t s = 0; s < 6; ++s) {
    const std::size_t k = spec.scales[s];
    std::size_t bins = k / 2 + 1;
    std::size_t frames = 1 + (16000 - k) / (k / 4);
    const auto in = DiscriminatorInput(x, k);
    CHECK(in.shape == std::vector<std::size_t>{2, bins, frames});
    REQUIRE(out.taps[s].size() == 7);
    for (std::size_t l = 0; l < 7; ++l) {
      bins = StridedLength(bins, strides[l]);
      frames = StridedLength(frames, strides[l]);
      CHECK(out.taps[s][l].shape == std::vector<std::size_t>{channels[l], bins, frames});
    }
    CHECK(out.patches[s].shape == out.taps[s][6].shape);
  }
  CHECK(out.patches[5].shape == std::vector<std::size_t>{1, 121, 4});
  CHECK(out.taps[5][0].shape == std::vector<std::size_t>{16, 961, 30});

  const auto again = discriminator_forward(x, spec, weights);
  for (std::size_t s = 0; s < 6; ++s) CHECK(again.patches[s].data == out.patches[s].data);

  const auto zero = discriminator_forward(x, spec, ZeroDiscriminatorWeights(spec));
  for (const auto& p : zero.patches) {
    for (float v : p.data) CHECK(v == 0.0f);
  }
  CHECK_THROWS_AS(discriminator_forward(signals::Buffer(16000, signals::WhiteNoise(1919, 1)), spec,
                                        weights),
                  CodecError);
}

TEST_CASE("Discriminator input holds magnitude and floored log-magnitude") {
  const auto x = signals::Buffer(16000, signals::WhiteNoise(600, 2));
  const auto t = DiscriminatorInput(x, 120);
  const auto dense = oracle::DenseStft(x.samples, 120, 30);
  REQUIRE(t.shape == std::vector<std::size_t>{2, dense.cols, dense.rows});
  for (std::size_t f = 0; f < dense.cols; ++f) {
    for (std::size_t n = 0; n < dense.rows; ++n) {
      const double m = dense.at(n, f);
      CHECK(t.data[f * dense.rows + n] == Catch::Approx(m).margin(1e-5));
      CHECK(t.data[(dense.cols + f) * dense.rows + n] ==
            Catch::Approx(std::log(std::max(m, 1e-7))).margin(1e-4));
    }
  }
}

TEST_CASE("LS-GAN losses at analytic points") {
  const std::vector<std::vector<std::size_t>> shapes = {{1, 5, 3}, {1, 9, 2}, {1, 4, 4}};
  CHECK(adversarial_losses(Constant(shapes, 1), Constant(shapes, 1)).generator == 0.0);
  CHECK(adversarial_losses(Constant(shapes, 1), Constant(shapes, 0.5f)).generator == 0.25);
  CHECK(adversarial_losses(Constant(shapes, 1), Constant(shapes, 0)).discriminator == 0.0);
  CHECK(adversarial_losses(Constant(shapes, 0), Constant(shapes, 1)).discriminator == 2.0);
  CHECK_THROWS_AS(adversarial_losses(Constant(shapes, 1), Constant({{1, 5, 3}}, 1)), CodecError);
}

TEST_CASE("Feature matching") {
  const DiscriminatorSpec spec;
  const auto w = RandomDiscriminatorWeights(spec, 11);
  const auto real = discriminator_forward(signals::Buffer(16000, signals::WhiteNoise(4000, 1)), spec, w);
  CHECK(feature_match_loss(real.taps, real.taps) == 0.0);
  std::vector<std::vector<nn::Tensor>> shifted;
  for (const auto& scale : real.taps) shifted.push_back(Plus(scale, 1.0f));
  CHECK(feature_match_loss(real.taps, shifted) == Catch::Approx(1.0).margin(1e-6));

  const auto fake = discriminator_forward(signals::Buffer(16000, signals::WhiteNoise(4000, 2)), spec, w);
  double per_scale = 0;
  for (std::size_t s = 0; s < 6; ++s) {
    per_scale += feature_match_loss(std::span(real.taps).subspan(s, 1), std::span(fake.taps).subspan(s, 1));
  }
  CHECK(feature_match_loss(real.taps, fake.taps) == Catch::Approx(per_scale / 6).epsilon(1e-9));

  auto broken = fake.taps;
  broken[2].pop_back();
  CHECK_THROWS_AS(feature_match_loss(real.taps, broken), CodecError);
}

TEST_CASE("Total generator loss") {
  CHECK(total_generator_loss({}) == 0.0);
  CHECK(total_generator_loss({1, 1, 1, 1, 1}) == 25.0);
  CHECK(total_generator_loss({0, 0, 0, 0, 2}) == 40.0);
  CHECK(total_generator_loss({0, 0, 3, 0, 0}) == 6.0);
  try {
    total_generator_loss({1, 1, std::nan(""), 1, 1});
    FAIL("expected a poisoned-loss error");
  } catch (const CodecError& e) {
    CHECK(e.code() == ErrorCode::kPoisonedLoss);
    CHECK(std::string(e.what()).find("pm") != std::string::npos);
  }
  LossWeights bad;
  bad.valley_power = 0.5;
  CHECK_THROWS_AS(bad.Validate(), CodecError);
}

TEST_CASE("Knowledge distillation loss") {
  const std::vector<std::vector<std::size_t>> gen = {{4, 10}, {8, 5}, {8, 5}, {16, 2}, {1, 2}};
  const std::vector<std::vector<std::size_t>> disc = {{16, 3, 3}, {1, 2, 2}};
  std::mt19937 rng(1);
  std::normal_distribution<float> nd;
  KdTaps teacher{Constant(gen, 0), Constant(disc, 0)};
  for (auto* side : {&teacher.generator, &teacher.discriminator}) {
    for (auto& t : *side) {
      for (float& v : t.data) v = nd(rng);
    }
  }
  CHECK(kd_loss(teacher, teacher) == 0.0);
  const KdTaps up{Plus(teacher.generator, 1.0f), teacher.discriminator};
  const KdTaps down{Plus(teacher.generator, -1.0f), teacher.discriminator};
  CHECK(kd_loss(teacher, up) == Catch::Approx(150.0).epsilon(1e-6));
  CHECK(kd_loss(teacher, down) == Catch::Approx(kd_loss(teacher, up)).epsilon(1e-6));
  const KdTaps disc_up{teacher.generator, Plus(teacher.discriminator, 1.0f)};
  CHECK(kd_loss(teacher, disc_up) == Catch::Approx(20.0).epsilon(1e-6));

  KdTaps bad = teacher;
  bad.generator[3] = nn::Tensor({16, 3});
  try {
    kd_loss(teacher, bad);
    FAIL("expected a congruence error");
  } catch (const CodecError& e) {
    CHECK(e.code() == ErrorCode::kCongruence);
    CHECK(std::string(e.what()).find("generator tap 3") != std::string::npos);
  }
}
