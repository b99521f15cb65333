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

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "swbcodec/architectures.h"
#include "swbcodec/bitstream.h"
#include "swbcodec/error.h"
#include "swbcodec/loss.h"
#include "swbcodec/pipeline.h"
#include "swbcodec/synth.h"
#include "swbcodec/transform.h"
#include "swbcodec/wav.h"

namespace swbcodec::cli {
namespace {

struct WeightsArgs {
  std::string dir;
  std::optional<std::uint64_t> seed;

  void AddTo(CLI::App* cmd) {
    auto* w = cmd->add_option("--weights", dir, "directory with encoder.pgwt and decoder.pgwt");
    auto* s = cmd->add_option("--seed-weights", seed, "use randomly initialized weights");
    w->excludes(s);
  }
};

int ExitFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kWeightsIncompatible:
    case ErrorCode::kFingerprintMismatch:
    case ErrorCode::kBlobSize:
      return kExitWeights;
    case ErrorCode::kInvalidArgument:
      return kExitUsage;
    default:
      return kExitFormat;
  }
}

std::string Hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Loads or synthesizes weights; every failure becomes a weights error that
// names the fingerprint the file should carry.
CodecWeights ResolveWeights(const WeightsArgs& args) {
  if (args.seed) return RandomCodecWeights(*args.seed);
  const std::string expected = "expected fingerprints: encoder " +
                               Hex(EncoderArchitecture().Fingerprint()) + ", decoder " +
                               Hex(DecoderArchitecture().Fingerprint());
  if (args.dir.empty()) {
    throw CodecError(ErrorCode::kWeightsIncompatible,
                     "no weights given; pass --weights DIR or --seed-weights N (" + expected + ")");
  }
  try {
    return LoadCodecWeights(args.dir);
  } catch (const CodecError& e) {
    throw CodecError(ErrorCode::kWeightsIncompatible,
                     std::string(e.what()) + " (" + expected + ")");
  }
}

std::optional<StreamMode> ParseMode(const std::string& mode) {
  if (mode.empty()) return std::nullopt;
  if (mode == "wb") return StreamMode::kWideband;
  if (mode == "swb") return StreamMode::kSuperWideband;
  throw CodecError(ErrorCode::kInvalidArgument, "unknown mode '" + mode + "'");
}

void EmitReport(std::ostream& out, const std::vector<std::pair<std::string, double>>& kv,
                bool json) {
  if (json) {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : kv) j[k] = v;
    out << j.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : kv) out << k << "=" << Num(v) << "\n";
}

int CmdEncode(const std::string& in, const std::string& out_path, const std::string& mode,
              const WeightsArgs& wargs, std::ostream& out) {
  const SampleBuffer audio = read_wav(in);
  DefaultModeForRate(audio.sample_rate);
  const auto requested = ParseMode(mode);
  const CodecWeights weights = ResolveWeights(wargs);
  const EncodedStream stream = SpeechEncoder(weights.encoder).Encode(audio, requested);
  const auto bytes = SerializeStream(stream.header, stream.frames);
  WriteFileBytes(out_path, bytes);
  const auto frame_bytes = FrameBytes(stream.header.mode);
  out << "mode=" << ModeName(stream.header.mode) << "\n"
      << "frames=" << stream.frames.size() << "\n"
      << "bytes=" << bytes.size() << "\n"
      << "bitrate_bps=" << frame_bytes * 8 * kFramesPerSecond << "\n";
  return kExitOk;
}

int CmdDecode(const std::string& in, const std::string& out_path, bool no_postfilter,
              const WeightsArgs& wargs, std::ostream& out, std::ostream& err) {
  std::ifstream file(in, std::ios::binary);
  Require(static_cast<bool>(file), ErrorCode::kIo, "cannot open " + in);
  const ParsedStream stream = read_stream(file);
  const CodecWeights weights = ResolveWeights(wargs);
  DecodeOptions options;
  options.postfilter = !no_postfilter;
  const DecodedAudio decoded =
      SpeechDecoder(weights.decoder).Decode(stream.header, stream.frames, options);
  for (std::size_t f : decoded.suspect_frames) {
    err << "warning: frame " << f
        << ": bandwidth-extension gain is an isolated outlier (possible corruption)\n";
  }
  write_wav(out_path, decoded.audio);
  out << "mode=" << ModeName(stream.header.mode) << "\n"
      << "frames=" << stream.frames.size() << "\n"
      << "samples=" << decoded.audio.size() << "\n";
  return kExitOk;
}

int CmdMetrics(const std::string& ref_path, const std::string& deg_path, bool json,
               std::ostream& out) {
  SampleBuffer ref = read_wav(ref_path);
  SampleBuffer deg = read_wav(deg_path);
  Require(ref.sample_rate == deg.sample_rate, ErrorCode::kFormat,
          "sample-rate mismatch: " + std::to_string(ref.sample_rate) + " vs " +
              std::to_string(deg.sample_rate));
  const auto max_lag = static_cast<std::size_t>(ref.sample_rate / 10);
  const std::ptrdiff_t lag = EstimateDelay(ref.view(), deg.view(), max_lag);
  auto drop = [](SampleBuffer& x, std::size_t n) {
    x.samples.erase(x.samples.begin(), x.samples.begin() + static_cast<std::ptrdiff_t>(std::min(n, x.size())));
  };
  if (lag > 0) drop(deg, static_cast<std::size_t>(lag));
  if (lag < 0) drop(ref, static_cast<std::size_t>(-lag));
  const std::size_t len = std::min(ref.size(), deg.size());
  ref.samples.resize(len);
  deg.samples.resize(len);
  Require(len >= kFullbandFftSizes.back(), ErrorCode::kFormat,
          "aligned signals have " + std::to_string(len) + " samples; need at least 2048");

  const PmLoss pm = pm_loss_components(ref, deg);
  EmitReport(out,
             {{"mrstft", mrstft_loss(ref, deg)},
              {"subband_mrstft", subband_mrstft_loss(ref, deg)},
              {"pm", pm.total()},
              {"pm_spectral", pm.spectral},
              {"pm_valley", pm.valley},
              {"delay_samples", static_cast<double>(lag)},
              {"samples", static_cast<double>(len)}},
             json);
  return kExitOk;
}

double MedianSeconds(int runs, const std::function<void()>& fn, double* spread) {
  std::vector<double> times;
  for (int r = 0; r < runs; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(times.begin(), times.end());
  const double median = times[times.size() / 2];
  if (spread) *spread = median > 0 ? (times.back() - times.front()) / median : 0.0;
  return median;
}

int CmdBench(double seconds, int runs, int threads, const WeightsArgs& wargs, bool json,
             std::ostream& out) {
  Require(seconds >= 10.0, ErrorCode::kInvalidArgument, "bench needs at least 10 s of input");
  Require(runs >= 1 && threads >= 1, ErrorCode::kInvalidArgument, "runs and threads must be >= 1");
  const CodecWeights weights = ResolveWeights(wargs);
  const SampleBuffer audio = MakeSyntheticSpeech(seconds, kSuperWidebandRate, 7).audio;
  const SpeechEncoder encoder(weights.encoder);
  const SpeechDecoder decoder(weights.decoder);
  const EncodedStream stream = encoder.Encode(audio);

  double enc_spread = 0.0, dec_spread = 0.0;
  const double enc = MedianSeconds(runs, [&] { encoder.Encode(audio); }, &enc_spread);
  const double dec =
      MedianSeconds(runs, [&] { decoder.Decode(stream.header, stream.frames); }, &dec_spread);
  std::vector<std::pair<std::string, double>> report = {
      {"audio_seconds", seconds},   {"runs", static_cast<double>(runs)},
      {"rtf_encoder", enc / seconds}, {"rtf_decoder", dec / seconds},
      {"spread_encoder", enc_spread}, {"spread_decoder", dec_spread}};

  if (threads > 1) {
    // Independent streams, one per thread, each running encode + decode.
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        const EncodedStream s = encoder.Encode(audio);
        decoder.Decode(s.header, s.frames);
      });
    }
    for (auto& th : pool) th.join();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.push_back({"threads", static_cast<double>(threads)});
    report.push_back({"realtime_streams", threads * seconds / wall});
  }
  EmitReport(out, report, json);
  return kExitOk;
}

int CmdInitWeights(const std::string& dir, std::uint64_t seed, std::ostream& out) {
  SaveCodecWeights(RandomCodecWeights(seed), dir);
  out << "encoder_fingerprint=" << Hex(EncoderArchitecture().Fingerprint()) << "\n"
      << "decoder_fingerprint=" << Hex(DecoderArchitecture().Fingerprint()) << "\n";
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Super-wideband hybrid speech codec"};
  app.name("swbcodec");
  app.require_subcommand(1);

  std::string in, out_path, mode, ref, deg, dir;
  bool no_postfilter = false, json = false;
  double seconds = 10.0;
  int runs = 5, threads = 1;
  std::uint64_t seed = 0;
  WeightsArgs enc_w, dec_w, bench_w;

  auto* encode = app.add_subcommand("encode", "WAV (16 or 32 kHz PCM16 mono) -> .pgna");
  encode->add_option("--in", in, "input WAV")->required();
  encode->add_option("--out", out_path, "output stream")->required();
  encode->add_option("--mode", mode, "wb or swb (default: from the sample rate)")
      ->check(CLI::IsMember({"wb", "swb"}));
  enc_w.AddTo(encode);

  auto* decode = app.add_subcommand("decode", ".pgna -> WAV");
  decode->add_option("--in", in, "input stream")->required();
  decode->add_option("--out", out_path, "output WAV")->required();
  decode->add_flag("--no-postfilter", no_postfilter, "skip the pitch postfilter");
  dec_w.AddTo(decode);

  auto* metrics = app.add_subcommand("metrics", "spectral losses between two WAVs");
  metrics->add_option("ref,--ref", ref, "reference WAV")->required();
  metrics->add_option("deg,--deg", deg, "degraded WAV")->required();
  metrics->add_flag("--json", json, "JSON instead of key=value lines");

  auto* bench = app.add_subcommand("bench", "real-time factor of encoder and decoder");
  bench->add_option("--seconds", seconds, "synthetic input length");
  bench->add_option("--runs", runs, "timed runs; the median is reported");
  bench->add_option("--threads", threads, "independent streams for a throughput figure");
  bench->add_flag("--json", json, "JSON instead of key=value lines");
  bench_w.AddTo(bench);

  auto* init = app.add_subcommand("init-weights", "write randomly initialized weight files");
  init->add_option("--out", dir, "output directory")->required();
  init->add_option("--seed", seed, "initialization seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode) return CmdEncode(in, out_path, mode, enc_w, out);
    if (*decode) return CmdDecode(in, out_path, no_postfilter, dec_w, out, err);
    if (*metrics) return CmdMetrics(ref, deg, json, out);
    if (*bench) return CmdBench(seconds, runs, threads, bench_w, json, out);
    if (*init) return CmdInitWeights(dir, seed, out);
  } catch (const CodecError& e) {
    err << "error: " << e.what() << "\n";
    return ExitFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace swbcodec::cli
