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

#ifndef SWBCODEC_WAV_H_
#define SWBCODEC_WAV_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "swbcodec/audio.h"

namespace swbcodec {

// Mono 16-bit PCM RIFF/WAVE only. Anything else is a kFormat error whose
// message says what was found.
SampleBuffer ParseWav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> SerializeWav(const SampleBuffer& audio);

SampleBuffer read_wav(const std::string& path);
void write_wav(const std::string& path, const SampleBuffer& audio);

// Round-to-nearest with saturation; the inverse scale is 1/32768.
std::int16_t ToPcm16(double sample);

std::vector<std::uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace swbcodec

#endif  // SWBCODEC_WAV_H_
