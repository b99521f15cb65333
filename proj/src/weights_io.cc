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

#include "swbcodec/weights_io.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "swbcodec/error.h"

namespace swbcodec::nn {
namespace {

template <typename T>
void PutLe(std::vector<std::uint8_t>& out, T value) {
  using U = std::make_unsigned_t<T>;
  const auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>((u >> (8 * i)) & 0xffu));
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T GetLe(const char* what) {
    Require(pos_ + sizeof(T) <= bytes_.size(), ErrorCode::kTruncated,
            std::string("weights file ends inside ") + what);
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u |= static_cast<std::make_unsigned_t<T>>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::span<const std::uint8_t> Take(std::size_t n) {
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> SerializeWeights(const ModelWeights& weights) {
  std::vector<std::uint8_t> out(std::begin(kWeightsMagic), std::end(kWeightsMagic));
  PutLe<std::uint16_t>(out, weights.format_version);
  PutLe<std::uint64_t>(out, weights.fingerprint);
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(weights.blobs.size()));
  for (const auto& [index, blob] : weights.blobs) {
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(index));
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(blob.size() * 4));
    for (float v : blob) PutLe<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

ModelWeights ParseWeights(std::span<const std::uint8_t> bytes) {
  Require(bytes.size() >= 4 && std::memcmp(bytes.data(), kWeightsMagic, 4) == 0,
          ErrorCode::kBadMagic, "not a PGWT weights file");
  Reader r(bytes.subspan(4));
  ModelWeights w;
  w.format_version = r.GetLe<std::uint16_t>("version");
  Require(w.format_version == kWeightsVersion, ErrorCode::kUnsupportedVersion,
          "weights format version " + std::to_string(w.format_version));
  w.fingerprint = r.GetLe<std::uint64_t>("fingerprint");
  const auto count = r.GetLe<std::uint32_t>("layer count");
  for (std::uint32_t b = 0; b < count; ++b) {
    const auto index = r.GetLe<std::uint32_t>("blob header");
    const auto length = r.GetLe<std::uint32_t>("blob header");
    Require(length % 4 == 0, ErrorCode::kBlobSize,
            "blob for layer " + std::to_string(index) + " is not whole floats");
    Require(length <= r.remaining(), ErrorCode::kTruncated,
            "blob for layer " + std::to_string(index) + " is truncated");
    auto raw = r.Take(length);
    std::vector<float> blob(length / 4);
    for (std::size_t i = 0; i < blob.size(); ++i) {
      std::uint32_t u = 0;
      for (std::size_t j = 0; j < 4; ++j) {
        u |= static_cast<std::uint32_t>(raw[4 * i + j]) << (8 * j);
      }
      blob[i] = std::bit_cast<float>(u);
    }
    Require(w.blobs.emplace(index, std::move(blob)).second, ErrorCode::kFormat,
            "duplicate blob for layer " + std::to_string(index));
  }
  Require(r.remaining() == 0, ErrorCode::kFormat, "trailing bytes after last blob");
  return w;
}

void save_weights(const ModelWeights& weights, const std::filesystem::path& path) {
  const auto bytes = SerializeWeights(weights);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  Require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path.string());
}

ModelWeights load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return ParseWeights(bytes);
}

ModelWeights LoadWeightsFor(const std::filesystem::path& path,
                            const ModelArchitecture& arch) {
  ModelWeights w = load_weights(path);
  if (w.fingerprint != arch.Fingerprint()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx, %s expects %016llx",
                  static_cast<unsigned long long>(w.fingerprint), arch.name.c_str(),
                  static_cast<unsigned long long>(arch.Fingerprint()));
    throw CodecError(ErrorCode::kFingerprintMismatch,
                     path.string() + " has fingerprint " + buf);
  }
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const std::size_t count = arch.layers[i].ParameterCount();
    if (count == 0) continue;
    auto it = w.blobs.find(i);
    Require(it != w.blobs.end() && it->second.size() == count, ErrorCode::kBlobSize,
            path.string() + ": layer " + std::to_string(i) + " needs " +
                std::to_string(count) + " parameters");
  }
  return w;
}

}  // namespace swbcodec::nn
