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
#include <filesystem>
#include <map>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "cli.h"
#include "json.hpp"
#include "support/signals.h"
#include "swbcodec/synth.h"
#include "swbcodec/wav.h"

using namespace swbcodec;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::Run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::map<std::string, std::string> KeyValues(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("swbcodec_cli_" + std::to_string(counter_++))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::vector<double> OnPcmGrid(std::vector<double> x) {
  for (double& v : x) v = ToPcm16(v) / 32768.0;
  return x;
}

}  // namespace

TEST_CASE("Encode writes exactly sized streams") {
  TempDir dir;
  write_wav(dir / "swb.wav", signals::Buffer(32000, signals::WhiteNoise(32000, 1)));
  write_wav(dir / "wb.wav", signals::Buffer(16000, signals::WhiteNoise(16000, 1)));
  write_wav(dir / "empty.wav", SampleBuffer(32000, std::size_t{0}));

  auto r = Run({"encode", "--in", dir / "swb.wav", "--out", dir / "swb.pgna", "--seed-weights", "1"});
  REQUIRE(r.code == 0);
  auto kv = KeyValues(r.out);
  CHECK(kv["mode"] == "swb");
  CHECK(kv["frames"] == "50");
  CHECK(kv["bytes"] == "1016");
  CHECK(kv["bitrate_bps"] == "8000");
  CHECK(fs::file_size(dir / "swb.pgna") == 1016);

  r = Run({"encode", "--in", dir / "wb.wav", "--out", dir / "wb.pgna", "--seed-weights", "1"});
  REQUIRE(r.code == 0);
  kv = KeyValues(r.out);
  CHECK(kv["mode"] == "wb");
  CHECK(kv["bitrate_bps"] == "6000");
  CHECK(fs::file_size(dir / "wb.pgna") == 766);

  r = Run({"encode", "--in", dir / "swb.wav", "--out", dir / "forced.pgna", "--mode", "wb",
           "--seed-weights", "1"});
  CHECK(r.code == 0);
  CHECK(fs::file_size(dir / "forced.pgna") == 766);

  r = Run({"encode", "--in", dir / "empty.wav", "--out", dir / "empty.pgna", "--seed-weights", "1"});
  CHECK(r.code == 0);
  CHECK(fs::file_size(dir / "empty.pgna") == 16);
}

TEST_CASE("Decode is deterministic and reports suspect frames") {
  TempDir dir;
  write_wav(dir / "in.wav", signals::Buffer(32000, signals::WhiteNoise(32000, 2)));
  REQUIRE(Run({"init-weights", "--out", dir / "w", "--seed", "5"}).code == 0);
  REQUIRE(Run({"encode", "--in", dir / "in.wav", "--out", dir / "s.pgna", "--weights", dir / "w"}).code == 0);
  auto r = Run({"decode", "--in", dir / "s.pgna", "--out", dir / "a.wav", "--weights", dir / "w"});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  CHECK(KeyValues(r.out)["samples"] == "32000");
  REQUIRE(Run({"decode", "--in", dir / "s.pgna", "--out", dir / "b.wav", "--weights", dir / "w"}).code == 0);
  CHECK(ReadFileBytes(dir / "a.wav") == ReadFileBytes(dir / "b.wav"));
  REQUIRE(Run({"decode", "--in", dir / "s.pgna", "--out", dir / "c.wav", "--weights", dir / "w",
               "--no-postfilter"}).code == 0);
  CHECK(read_wav(dir / "c.wav").size() == 32000);

  auto bytes = ReadFileBytes(dir / "s.pgna");
  bytes[16 + 20 * 10 + 15] ^= 0xA5;
  WriteFileBytes(dir / "bad.pgna", bytes);
  r = Run({"decode", "--in", dir / "bad.pgna", "--out", dir / "d.wav", "--weights", dir / "w"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning: frame 10:") != std::string::npos);

  bytes.resize(bytes.size() - 7);
  WriteFileBytes(dir / "trunc.pgna", bytes);
  r = Run({"decode", "--in", dir / "trunc.pgna", "--out", dir / "e.wav", "--weights", dir / "w"});
  CHECK(r.code == 3);
  CHECK(r.err.find("49 complete frames") != std::string::npos);
}

TEST_CASE("Metrics report the losses") {
  TempDir dir;
  const auto x = OnPcmGrid(signals::WhiteNoise(16000, 3, 0.1));
  std::vector<double> x2 = x;
  for (double& v : x2) v *= 2;
  write_wav(dir / "x.wav", signals::Buffer(16000, x));
  write_wav(dir / "x2.wav", signals::Buffer(16000, x2));

  auto r = Run({"metrics", dir / "x.wav", dir / "x.wav"});
  REQUIRE(r.code == 0);
  auto kv = KeyValues(r.out);
  for (const char* k : {"mrstft", "subband_mrstft", "pm", "pm_spectral", "pm_valley", "delay_samples"}) {
    CHECK(std::stod(kv[k]) == 0.0);
  }
  CHECK(kv["samples"] == "16000");

  r = Run({"metrics", "--ref", dir / "x.wav", "--deg", dir / "x2.wav", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["mrstft"].get<double>() == Catch::Approx(3 * (std::log(2.0) + 0.5)).margin(1e-6));
  CHECK(j["delay_samples"].get<double>() == 0.0);

  // A delayed copy is aligned before scoring.
  std::vector<double> delayed(100, 0.0);
  delayed.insert(delayed.end(), x.begin(), x.end());
  write_wav(dir / "late.wav", signals::Buffer(16000, delayed));
  kv = KeyValues(Run({"metrics", dir / "x.wav", dir / "late.wav"}).out);
  CHECK(kv["delay_samples"] == "100");
  CHECK(std::stod(kv["mrstft"]) == 0.0);
}

TEST_CASE("Exit codes") {
  TempDir dir;
  CHECK(Run({}).code == 2);
  CHECK(Run({"transmogrify"}).code == 2);
  CHECK(Run({"encode", "--in", "x.wav"}).code == 2);
  CHECK(Run({"encode", "--in", "a", "--out", "b", "--mode", "fb", "--seed-weights", "1"}).code == 2);
  CHECK(Run({"bench", "--seconds", "1", "--seed-weights", "1"}).code == 2);
  CHECK(Run({"--help"}).code == 0);

  write_wav(dir / "in.wav", signals::Buffer(16000, signals::WhiteNoise(1600, 1)));
  auto r = Run({"encode", "--in", dir / "in.wav", "--out", dir / "o.pgna"});
  CHECK(r.code == 4);
  CHECK(r.err.find("0xf03741bf9ae66c61") != std::string::npos);
  CHECK(r.err.find("0x81b407fb61a939ba") != std::string::npos);
  CHECK(Run({"encode", "--in", dir / "in.wav", "--out", dir / "o.pgna", "--weights", dir / "nowhere"}).code == 4);

  CHECK(Run({"encode", "--in", dir / "missing.wav", "--out", dir / "o.pgna", "--seed-weights", "1"}).code == 5);
  CHECK(Run({"decode", "--in", dir / "missing.pgna", "--out", dir / "o.wav", "--seed-weights", "1"}).code == 5);

  // Stereo input.
  std::vector<std::uint8_t> stereo = SerializeWav(SampleBuffer(16000, std::size_t{4}));
  stereo[22] = 2;
  WriteFileBytes(dir / "stereo.wav", stereo);
  r = Run({"encode", "--in", dir / "stereo.wav", "--out", dir / "o.pgna", "--seed-weights", "1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("2 channels") != std::string::npos);

  write_wav(dir / "44k.wav", SampleBuffer(44100, std::size_t{100}));
  CHECK(Run({"encode", "--in", dir / "44k.wav", "--out", dir / "o.pgna", "--seed-weights", "1"}).code == 3);
  WriteFileBytes(dir / "junk.pgna", std::vector<std::uint8_t>(40, 7));
  CHECK(Run({"decode", "--in", dir / "junk.pgna", "--out", dir / "o.wav", "--seed-weights", "1"}).code == 3);
}
