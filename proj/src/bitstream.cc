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

#include "swbcodec/bitstream.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "swbcodec/error.h"

namespace swbcodec {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'P', 'G', 'N', 'A'};
constexpr int kIndexBits = 3;
constexpr int kEmbeddingDims = 40;
constexpr int kGainBits = 8;
constexpr int kEnvelopeBits = 4;

}  // namespace

std::size_t FrameBytes(StreamMode mode) {
  return mode == StreamMode::kWideband ? kWbFrameBytes : kSwbFrameBytes;
}

int ModeSampleRate(StreamMode mode) {
  return mode == StreamMode::kWideband ? kWidebandRate : kSuperWidebandRate;
}

const char* ModeName(StreamMode mode) {
  return mode == StreamMode::kWideband ? "wb" : "swb";
}

std::array<std::uint8_t, kHeaderBytes> SerializeHeader(const StreamHeader& h) {
  std::array<std::uint8_t, kHeaderBytes> out{};
  std::copy(kMagic.begin(), kMagic.end(), out.begin());
  out[4] = h.version;
  out[5] = static_cast<std::uint8_t>(h.mode);
  for (int i = 0; i < 4; ++i) out[6 + i] = static_cast<std::uint8_t>(h.sample_rate >> (8 * i));
  out[10] = static_cast<std::uint8_t>(h.padding_samples & 0xff);
  out[11] = static_cast<std::uint8_t>(h.padding_samples >> 8);
  return out;
}

StreamHeader ParseHeader(std::span<const std::uint8_t> b) {
  Require(b.size() >= kHeaderBytes, ErrorCode::kTruncated,
          "stream header needs 16 bytes, got " + std::to_string(b.size()));
  Require(std::equal(kMagic.begin(), kMagic.end(), b.begin()), ErrorCode::kBadMagic,
          "stream does not start with PGNA");
  StreamHeader h;
  h.version = b[4];
  Require(h.version == kStreamVersion, ErrorCode::kUnsupportedVersion,
          "stream version " + std::to_string(h.version));
  Require(b[5] <= 1, ErrorCode::kFormat, "unknown stream mode " + std::to_string(b[5]));
  h.mode = static_cast<StreamMode>(b[5]);
  h.sample_rate = 0;
  for (int i = 0; i < 4; ++i) h.sample_rate |= static_cast<std::uint32_t>(b[6 + i]) << (8 * i);
  Require(h.sample_rate == static_cast<std::uint32_t>(ModeSampleRate(h.mode)), ErrorCode::kFormat,
          "sample rate " + std::to_string(h.sample_rate) + " does not match mode " +
              ModeName(h.mode));
  h.padding_samples = static_cast<std::uint16_t>(b[10] | (b[11] << 8));
  return h;
}

void BitWriter::Write(std::uint32_t value, int bits) {
  for (int i = bits - 1; i >= 0; --i) {
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if ((value >> i) & 1u) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
    ++bits_;
  }
}

std::vector<std::uint8_t> BitWriter::Finish() && { return std::move(bytes_); }

std::uint32_t BitReader::Read(int bits) {
  Require(pos_ + static_cast<std::size_t>(bits) <= bytes_.size() * 8, ErrorCode::kFraming,
          "bit reader overrun");
  std::uint32_t v = 0;
  for (int i = 0; i < bits; ++i, ++pos_) {
    v = (v << 1) | ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u);
  }
  return v;
}

BitstreamFrame pack_frame(const QuantizedFrame& wb, const std::optional<BweParams>& bwe,
                          StreamMode mode) {
  Require(wb.indices.size() == kEmbeddingDims, ErrorCode::kInvalidArgument,
          "frame has " + std::to_string(wb.indices.size()) + " indices, expected 40");
  Require(bwe.has_value() == (mode == StreamMode::kSuperWideband), ErrorCode::kInvalidArgument,
          std::string("BWE parameters must be present exactly in swb mode (mode ") +
              ModeName(mode) + ")");
  BitWriter w;
  for (std::size_t d = 0; d < wb.indices.size(); ++d) {
    Require(wb.indices[d] < (1u << kIndexBits), ErrorCode::kInvalidArgument,
            "index " + std::to_string(wb.indices[d]) + " out of range at dim " + std::to_string(d));
    w.Write(wb.indices[d], kIndexBits);
  }
  if (bwe) {
    w.Write(bwe->global_gain_index, kGainBits);
    for (std::size_t b = 0; b < bwe->envelope_indices.size(); ++b) {
      Require(bwe->envelope_indices[b] < (1u << kEnvelopeBits), ErrorCode::kInvalidArgument,
              "envelope index out of range at subband " + std::to_string(b));
      w.Write(bwe->envelope_indices[b], kEnvelopeBits);
    }
  }
  return {std::move(w).Finish()};
}

UnpackedFrame unpack_frame(std::span<const std::uint8_t> bytes, StreamMode mode) {
  Require(bytes.size() == FrameBytes(mode), ErrorCode::kFraming,
          std::string(ModeName(mode)) + " frame must be " + std::to_string(FrameBytes(mode)) +
              " bytes, got " + std::to_string(bytes.size()));
  BitReader r(bytes);
  UnpackedFrame out;
  out.wb.indices.resize(kEmbeddingDims);
  for (auto& idx : out.wb.indices) idx = static_cast<std::uint8_t>(r.Read(kIndexBits));
  if (mode == StreamMode::kSuperWideband) {
    BweParams p;
    p.global_gain_index = static_cast<std::uint8_t>(r.Read(kGainBits));
    for (auto& e : p.envelope_indices) e = static_cast<std::uint8_t>(r.Read(kEnvelopeBits));
    out.bwe = p;
  }
  return out;
}

void write_stream(const StreamHeader& header, std::span<const BitstreamFrame> frames,
                  std::ostream& sink) {
  const auto h = SerializeHeader(header);
  sink.write(reinterpret_cast<const char*>(h.data()), static_cast<std::streamsize>(h.size()));
  for (std::size_t i = 0; i < frames.size(); ++i) {
    Require(frames[i].bytes.size() == FrameBytes(header.mode), ErrorCode::kFraming,
            "frame " + std::to_string(i) + " has the wrong size for the stream mode");
    sink.write(reinterpret_cast<const char*>(frames[i].bytes.data()),
               static_cast<std::streamsize>(frames[i].bytes.size()));
  }
  Require(static_cast<bool>(sink), ErrorCode::kIo, "failed to write stream");
}

std::vector<std::uint8_t> SerializeStream(const StreamHeader& header,
                                          std::span<const BitstreamFrame> frames) {
  std::ostringstream os(std::ios::binary);
  write_stream(header, frames, os);
  const std::string s = os.str();
  return {s.begin(), s.end()};
}

StreamReader::StreamReader(std::istream& source) : source_(source) {
  std::array<std::uint8_t, kHeaderBytes> buf{};
  source_.read(reinterpret_cast<char*>(buf.data()), kHeaderBytes);
  header_ = ParseHeader(std::span<const std::uint8_t>(buf.data(),
                                                      static_cast<std::size_t>(source_.gcount())));
}

bool StreamReader::Next(BitstreamFrame& frame) {
  const std::size_t n = FrameBytes(header_.mode);
  frame.bytes.resize(n);
  source_.read(reinterpret_cast<char*>(frame.bytes.data()), static_cast<std::streamsize>(n));
  const auto got = static_cast<std::size_t>(source_.gcount());
  if (got == 0) return false;
  Require(got == n, ErrorCode::kTruncated,
          "trailing partial frame of " + std::to_string(got) + " bytes after " +
              std::to_string(frames_read_) + " complete frames");
  ++frames_read_;
  return true;
}

ParsedStream read_stream(std::istream& source) {
  StreamReader reader(source);
  ParsedStream out{reader.header(), {}};
  BitstreamFrame f;
  while (reader.Next(f)) out.frames.push_back(f);
  return out;
}

ParsedStream ParseStream(std::span<const std::uint8_t> bytes) {
  std::istringstream is(std::string(bytes.begin(), bytes.end()), std::ios::binary);
  return read_stream(is);
}

}  // namespace swbcodec
