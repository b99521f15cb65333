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

#include "swbcodec/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "swbcodec/error.h"

namespace swbcodec {
namespace {

std::uint32_t Le32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t Le16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

void Put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

bool Tag(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

}  // namespace

std::int16_t ToPcm16(double sample) {
  const double s = std::nearbyint(sample * 32768.0);
  return static_cast<std::int16_t>(std::clamp(s, -32768.0, 32767.0));
}

SampleBuffer ParseWav(std::span<const std::uint8_t> b) {
  Require(b.size() >= 12 && Tag(b, 0, "RIFF") && Tag(b, 8, "WAVE"), ErrorCode::kFormat,
          "not a RIFF/WAVE file");
  bool have_fmt = false;
  int rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::uint32_t len = Le32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (Tag(b, pos, "fmt ")) {
      Require(len >= 16 && body + 16 <= b.size(), ErrorCode::kFormat, "short fmt chunk");
      const std::uint16_t format = Le16(b, body);
      const std::uint16_t channels = Le16(b, body + 2);
      const std::uint16_t bits = Le16(b, body + 14);
      Require(format == 1, ErrorCode::kFormat,
              "unsupported WAV encoding (format tag " + std::to_string(format) +
                  "); only 16-bit PCM is accepted");
      Require(channels == 1, ErrorCode::kFormat,
              "WAV has " + std::to_string(channels) + " channels; only mono is accepted");
      Require(bits == 16, ErrorCode::kFormat,
              "WAV has " + std::to_string(bits) + "-bit samples; only 16-bit PCM is accepted");
      rate = static_cast<int>(Le32(b, body + 4));
      have_fmt = true;
    } else if (Tag(b, pos, "data")) {
      Require(have_fmt, ErrorCode::kFormat, "data chunk before fmt chunk");
      Require(len % 2 == 0, ErrorCode::kFormat, "odd data chunk length");
      Require(body + len <= b.size(), ErrorCode::kFormat, "data chunk runs past end of file");
      SampleBuffer out(rate, len / 2);
      for (std::size_t i = 0; i < out.size(); ++i) {
        out.samples[i] = static_cast<std::int16_t>(Le16(b, body + 2 * i)) / 32768.0;
      }
      return out;
    }
    pos = body + len + (len & 1);
  }
  throw CodecError(ErrorCode::kFormat, have_fmt ? "WAV has no data chunk" : "WAV has no fmt chunk");
}

std::vector<std::uint8_t> SerializeWav(const SampleBuffer& audio) {
  const auto data_bytes = static_cast<std::uint32_t>(audio.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  Put32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  Put32(out, 16);
  Put16(out, 1);
  Put16(out, 1);
  Put32(out, static_cast<std::uint32_t>(audio.sample_rate));
  Put32(out, static_cast<std::uint32_t>(audio.sample_rate) * 2);
  Put16(out, 2);
  Put16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  Put32(out, data_bytes);
  for (double s : audio.samples) Put16(out, static_cast<std::uint16_t>(ToPcm16(s)));
  return out;
}

std::vector<std::uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFileBytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  Require(static_cast<bool>(out), ErrorCode::kIo, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  Require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path);
}

SampleBuffer read_wav(const std::string& path) { return ParseWav(ReadFileBytes(path)); }

void write_wav(const std::string& path, const SampleBuffer& audio) {
  WriteFileBytes(path, SerializeWav(audio));
}

}  // namespace swbcodec
