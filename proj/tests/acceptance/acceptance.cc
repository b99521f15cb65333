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

// One PASS/FAIL line per release criterion; exits nonzero if any fails.
// Everything runs on randomly initialized weights.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "support/signals.h"
#include "swbcodec/architectures.h"
#include "swbcodec/bitstream.h"
#include "swbcodec/error.h"
#include "swbcodec/filterbank.h"
#include "swbcodec/loss.h"
#include "swbcodec/pipeline.h"
#include "swbcodec/postfilter.h"
#include "swbcodec/synth.h"
#include "swbcodec/transform.h"

using namespace swbcodec;

namespace {

// Pinned tolerances.
constexpr double kQmfMinSnrDb = 50.0;
constexpr double kQmfMaxSeconds = 1.0;
constexpr double kTdacMaxRelRms = 1e-6;
constexpr double kLossTol = 1e-6;
constexpr double kTransparentTol = 1e-6;
constexpr double kBweMaxDb = 3.0;
constexpr double kBweMinFraction = 0.90;
constexpr double kVoicedFrameFraction = 0.75;
constexpr double kMaxRtf = 1.0;

int failures = 0;

void Report(const char* id, const char* what, bool pass, const std::string& detail) {
  std::printf("%s %-3s %-28s %s\n", pass ? "PASS" : "FAIL", id, what, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double Seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void QmfRoundTrip() {
  const QmfSpec spec = DefaultQmfSpec();
  const auto x = signals::WhiteNoise(10 * kSuperWidebandRate, 42);
  SampleBuffer y;
  const double t = Seconds([&] { y = qmf_synthesize(qmf_analyze(signals::Buffer(32000, x), spec), spec); });
  const std::size_t d = spec.delay();
  double sig = 0, err = 0;
  for (std::size_t i = 0; i + d < x.size(); ++i) {
    sig += x[i] * x[i];
    err += (y.samples[i + d] - x[i]) * (y.samples[i + d] - x[i]);
  }
  const double snr = 10 * std::log10(sig / err);
  Report("1", "qmf-round-trip", snr >= kQmfMinSnrDb && t < kQmfMaxSeconds,
         Fmt("snr=%.2f dB (>= %.0f) runtime=%.3f s", snr, kQmfMinSnrDb, t));
}

void MdctTdac() {
  const std::size_t n = 320;
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t blocks = 3 + seed % 17;
    const auto x = signals::WhiteNoise(n * blocks, 1000 + seed);
    const ImdctResult r = imdct(mdct(x, n), n);
    double e = 0, s = 0;
    for (std::size_t i = r.valid_begin; i < r.valid_end; ++i) {
      e += (r.samples[i] - x[i]) * (r.samples[i] - x[i]);
      s += x[i] * x[i];
    }
    worst = std::max(worst, std::sqrt(e / s));
  }
  Report("2", "mdct-tdac", worst <= kTdacMaxRelRms, Fmt("worst relative rms=%.3g over 100 seeds", worst));
}

void RateExactness(const CodecWeights& w) {
  const SpeechEncoder enc(w.encoder);
  bool ok = FrameBytes(StreamMode::kSuperWideband) * 8 * kFramesPerSecond == 8000 &&
            FrameBytes(StreamMode::kWideband) * 8 * kFramesPerSecond == 6000;
  for (double sec : {0.0, 0.02, 1.0, 2.5, 3.01}) {
    const auto n32 = static_cast<std::size_t>(sec * 32000);
    const auto swb = enc.Encode(signals::Buffer(32000, signals::WhiteNoise(n32, 1)));
    const std::size_t f_swb = (n32 + 639) / 640;
    ok = ok && swb.frames.size() == f_swb &&
         SerializeStream(swb.header, swb.frames).size() == 16 + 20 * f_swb;
    const auto n16 = n32 / 2;
    const auto wb = enc.Encode(signals::Buffer(16000, signals::WhiteNoise(n16, 1)));
    const std::size_t f_wb = (n16 + 319) / 320;
    ok = ok && wb.frames.size() == f_wb &&
         SerializeStream(wb.header, wb.frames).size() == 16 + 15 * f_wb;
  }
  Report("3", "rate-exactness", ok, "swb 16+20F bytes (8000 bps), wb 16+15F bytes (6000 bps)");
}

void BitstreamBijectivity() {
  std::mt19937_64 rng(2024);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000000; ++i) {
    const StreamMode mode = (i & 1) ? StreamMode::kSuperWideband : StreamMode::kWideband;
    QuantizedFrame wb;
    wb.indices.resize(40);
    for (auto& v : wb.indices) v = static_cast<std::uint8_t>(rng() % 8);
    std::optional<BweParams> bwe;
    if (mode == StreamMode::kSuperWideband) {
      BweParams p;
      p.global_gain_index = static_cast<std::uint8_t>(rng() % 256);
      for (auto& e : p.envelope_indices) e = static_cast<std::uint8_t>(rng() % 16);
      bwe = p;
    }
    const UnpackedFrame u = unpack_frame(pack_frame(wb, bwe, mode).bytes, mode);
    if (!(u.wb == wb) || u.bwe != bwe) ++mismatches;
  }
  std::size_t crashes = 0;
  for (int i = 0; i < 100000; ++i) {
    std::vector<std::uint8_t> bytes(rng() % 48);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    if (i % 4 == 0 && bytes.size() >= 4) {
      const char magic[] = "PGNA";
      std::copy(magic, magic + 4, bytes.begin());
    }
    try {
      unpack_frame(bytes, (i & 1) ? StreamMode::kSuperWideband : StreamMode::kWideband);
    } catch (const CodecError&) {
    } catch (...) {
      ++crashes;
    }
    try {
      ParseStream(bytes);
    } catch (const CodecError&) {
    } catch (...) {
      ++crashes;
    }
  }
  Report("4", "bitstream-bijectivity", mismatches == 0 && crashes == 0,
         Fmt("1e6 round trips: %.0f mismatches; 1e5 fuzz frames: %.0f non-codec failures", mismatches,
             crashes));
}

void EncoderDecoderShape(const CodecWeights& w) {
  const WbncEncoder enc(w.encoder);
  const WbncDecoder dec(w.decoder);
  bool ok = true;
  const auto x = signals::WhiteNoise(320 * 12, 5, 0.2);
  const auto emb = enc.Embed(signals::Buffer(16000, x));
  ok = ok && emb.output.shape == std::vector<std::size_t>{40, 12};
  const auto frames = enc.Encode(signals::Buffer(16000, x));
  ok = ok && frames.size() == 12;
  const SampleBuffer y = dec.Decode(frames);
  ok = ok && y.size() == 320 * 12;
  for (std::size_t k : {1u, 5u, 11u}) {
    const auto prefix = enc.Encode(signals::Buffer(16000, std::vector<double>(x.begin(), x.begin() + 320 * k)));
    for (std::size_t f = 0; f < k; ++f) ok = ok && prefix[f] == frames[f];
    const SampleBuffer yk = dec.Decode(std::span(frames).first(k));
    for (std::size_t i = 0; i < yk.size(); ++i) ok = ok && yk.samples[i] == y.samples[i];
  }
  const CodecWeights again = RandomCodecWeights(1);
  ok = ok && WbncEncoder(again.encoder).Encode(signals::Buffer(16000, x)) == frames;
  ok = ok && WbncDecoder(again.decoder).Decode(frames).samples == y.samples;
  Report("5", "encoder-decoder-shape", ok, "320 samples per 40-dim embedding; prefix; determinism");
}

void LossAnalyticValues() {
  const auto x = signals::Buffer(16000, signals::WhiteNoise(16000, 9));
  SampleBuffer x2 = x;
  for (double& v : x2.samples) v *= 2;
  const double mr = mrstft_loss(x, x2);
  const double mr_expect = 3 * (std::log(2.0) + 0.5);
  const double total = total_generator_loss({1, 1, 1, 1, 1});
  const std::vector<nn::Tensor> real(6, nn::Tensor({1, 8, 4}, 1.0f));
  const std::vector<nn::Tensor> half(6, nn::Tensor({1, 8, 4}, 0.5f));
  const double adv = adversarial_losses(real, half).generator;
  KdTaps taps;
  for (std::size_t t = 0; t < 5; ++t) taps.generator.push_back(nn::Tensor({4, 10 + t}, 0.3f));
  taps.discriminator.assign(7, nn::Tensor({2, 3, 3}, -0.7f));
  const double kd = kd_loss(taps, taps);
  const bool ok = std::abs(mr - mr_expect) <= kLossTol && total == 25.0 && adv == 0.25 && kd == 0.0;
  Report("6", "loss-analytic-values", ok,
         Fmt("mrstft(x,2x)=%.9f (expect %.9f) total=%.1f", mr, mr_expect, total) +
             Fmt(" adv=%.3f kd=%.1f", adv, kd));
}

void PostfilterResponse() {
  double max_h = 0;
  for (std::size_t lag = 32; lag <= 320; ++lag) {
    for (double g : {0.1, 0.25, 0.5, 0.99}) {
      for (int i = 0; i <= 2048; ++i) max_h = std::max(max_h, CombMagnitude(M_PI * i / 2048, lag, g));
    }
  }
  double worst = 0;
  for (std::size_t lag : {32u, 80u, 100u, 160u, 320u}) {
    // Exactly periodic with period `lag`: random cycle repeated.
    const auto cycle = signals::WhiteNoise(lag, lag, 0.2);
    std::vector<double> x(4000);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = cycle[n % lag];
    const SampleBuffer y = apply_postfilter(signals::Buffer(16000, x), {lag, 1.0});
    Postfilter stream;
    std::vector<double> z;
    for (std::size_t pos = 0; pos < x.size(); pos += 320) {
      const auto out = stream.ProcessFrame(std::span(x).subspan(pos, std::min<std::size_t>(320, x.size() - pos)),
                                           {lag, 1.0});
      z.insert(z.end(), out.begin(), out.end());
    }
    for (std::size_t n = 0; n < x.size(); ++n) {
      worst = std::max({worst, std::abs(y.samples[n] - x[n]), std::abs(z[n] - x[n])});
    }
  }
  Report("7", "postfilter-response", max_h <= 1.0 + 1e-12 && worst <= kTransparentTol,
         Fmt("max|H|=%.15f transparent max error=%.3g", max_h, worst));
}

void BweEnergyTracking(const CodecWeights& w) {
  const SyntheticSpeech speech = MakeSyntheticSpeech(30.0, kSuperWidebandRate, 30);
  const auto enc = SpeechEncoder(w.encoder).Encode(speech.audio);
  const auto parsed = ParseStream(SerializeStream(enc.header, enc.frames));
  const auto out = SpeechDecoder(w.decoder).Decode(parsed.header, parsed.frames);
  const QmfSpec spec = DefaultQmfSpec();
  const BandPair src = qmf_analyze(speech.audio, spec);
  const BandPair dec = qmf_analyze(out.audio, spec);
  std::size_t voiced = 0, within = 0;
  for (std::size_t f = 0; f < speech.audio.num_frames(kFrameSamplesSwb); ++f) {
    if (speech.VoicedFraction(f, kFrameSamplesSwb) < kVoicedFrameFraction) continue;
    ++voiced;
    const double a = Energy(src.high.frame(f, kFrameSamplesWb));
    const double b = Energy(dec.high.frame(f, kFrameSamplesWb));
    if (a > 0 && b > 0 && std::abs(10 * std::log10(b / a)) <= kBweMaxDb) ++within;
  }
  const double frac = voiced ? static_cast<double>(within) / voiced : 0.0;
  Report("8", "bwe-energy-tracking", voiced > 0 && frac >= kBweMinFraction,
         Fmt("%.1f%% of %.0f voiced frames within +/-3 dB (need %.0f%%)", 100 * frac, voiced,
             100 * kBweMinFraction));
}

void RealTimeFactor(const CodecWeights& w) {
  const double seconds = 10.0;
  const SampleBuffer audio = MakeSyntheticSpeech(seconds, kSuperWidebandRate, 7).audio;
  const SpeechEncoder enc(w.encoder);
  const SpeechDecoder dec(w.decoder);
  EncodedStream stream;
  const double te = Seconds([&] { stream = enc.Encode(audio); });
  const double td = Seconds([&] { dec.Decode(stream.header, stream.frames); });
  const double rtf_e = te / seconds, rtf_d = td / seconds;
  Report("9", "real-time-factor", rtf_e < kMaxRtf && rtf_d < kMaxRtf,
         Fmt("encoder rtf=%.4f decoder rtf=%.4f (single thread, 10 s swb)", rtf_e, rtf_d));
}

}  // namespace

int main() {
  const CodecWeights weights = RandomCodecWeights(1);
  QmfRoundTrip();
  MdctTdac();
  RateExactness(weights);
  BitstreamBijectivity();
  EncoderDecoderShape(weights);
  LossAnalyticValues();
  PostfilterResponse();
  BweEnergyTracking(weights);
  RealTimeFactor(weights);
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
