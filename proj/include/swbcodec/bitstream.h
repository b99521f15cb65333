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

#ifndef SWBCODEC_BITSTREAM_H_
#define SWBCODEC_BITSTREAM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "swbcodec/bwe.h"
#include "swbcodec/wbnc.h"

namespace swbcodec {

enum class StreamMode : std::uint8_t { kWideband = 0, kSuperWideband = 1 };

inline constexpr std::size_t kHeaderBytes = 16;
inline constexpr std::size_t kWbFrameBytes = 15;
inline constexpr std::size_t kSwbFrameBytes = 20;
inline constexpr std::uint8_t kStreamVersion = 1;

std::size_t FrameBytes(StreamMode mode);
int ModeSampleRate(StreamMode mode);
const char* ModeName(StreamMode mode);

// 16 bytes: "PGNA", version u8, mode u8, sample_rate u32 LE, then 6 reserved
// bytes of which the first two carry the trailing padding (u16 LE) the
// encoder added to reach a whole frame.
struct StreamHeader {
  std::uint8_t version = kStreamVersion;
  StreamMode mode = StreamMode::kSuperWideband;
  std::uint32_t sample_rate = kSuperWidebandRate;
  std::uint16_t padding_samples = 0;

  bool operator==(const StreamHeader&) const = default;
};

std::array<std::uint8_t, kHeaderBytes> SerializeHeader(const StreamHeader& header);
StreamHeader ParseHeader(std::span<const std::uint8_t> bytes);

struct BitstreamFrame {
  std::vector<std::uint8_t> bytes;

  bool operator==(const BitstreamFrame&) const = default;
};

struct UnpackedFrame {
  QuantizedFrame wb;
  std::optional<BweParams> bwe;
};

// MSB-first bit packing.
class BitWriter {
 public:
  void Write(std::uint32_t value, int bits);
  std::size_t bit_count() const { return bits_; }
  std::vector<std::uint8_t> Finish() &&;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint32_t Read(int bits);

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// 40 x 3-bit indices, then in SWB mode the BWE gain (8 bits) and envelope
// (8 x 4 bits).
BitstreamFrame pack_frame(const QuantizedFrame& wb, const std::optional<BweParams>& bwe,
                          StreamMode mode);
// Every bit pattern of the right length decodes; only the length is checked.
UnpackedFrame unpack_frame(std::span<const std::uint8_t> bytes, StreamMode mode);

void write_stream(const StreamHeader& header, std::span<const BitstreamFrame> frames,
                  std::ostream& sink);
std::vector<std::uint8_t> SerializeStream(const StreamHeader& header,
                                          std::span<const BitstreamFrame> frames);

// Sequential reader holding one frame at a time.
class StreamReader {
 public:
  explicit StreamReader(std::istream& source);

  const StreamHeader& header() const { return header_; }
  // False at a clean end of stream; throws kTruncated on a partial frame.
  bool Next(BitstreamFrame& frame);
  std::size_t frames_read() const { return frames_read_; }

 private:
  std::istream& source_;
  StreamHeader header_;
  std::size_t frames_read_ = 0;
};

struct ParsedStream {
  StreamHeader header;
  std::vector<BitstreamFrame> frames;
};
ParsedStream read_stream(std::istream& source);
ParsedStream ParseStream(std::span<const std::uint8_t> bytes);

}  // namespace swbcodec

#endif  // SWBCODEC_BITSTREAM_H_
