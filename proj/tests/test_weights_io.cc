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

#include <filesystem>
#include <functional>

#include "catch2/catch_amalgamated.hpp"
#include "swbcodec/architectures.h"
#include "swbcodec/error.h"
#include "swbcodec/weights_io.h"

using namespace swbcodec;
using namespace swbcodec::nn;

namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const CodecError& e) {
    return e.code();
  }
  FAIL("expected a CodecError");
  return ErrorCode::kIo;
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("swbcodec_test_" + name);
}

}  // namespace

TEST_CASE("Serialized layout is byte-exact") {
  ModelWeights w;
  w.fingerprint = 0x0102030405060708ULL;
  w.blobs[3] = {1.0f, -2.0f};
  const std::vector<std::uint8_t> expected = {
      'P', 'G', 'W', 'T', 1, 0,                    // magic, version
      8, 7, 6, 5, 4, 3, 2, 1,                      // fingerprint LE
      1, 0, 0, 0,                                  // blob count
      3, 0, 0, 0, 8, 0, 0, 0,                      // layer 3, 8 bytes
      0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0xc0};  // 1.0f, -2.0f
  CHECK(SerializeWeights(w) == expected);
  CHECK(ParseWeights(expected) == w);
}

TEST_CASE("Weights round-trip through a file and match their architecture") {
  const auto arch = EncoderArchitecture();
  const ModelWeights w = RandomWeights(arch, 77);
  const auto path = TempPath("enc.pgwt");
  save_weights(w, path);
  CHECK(load_weights(path) == w);
  CHECK(LoadWeightsFor(path, arch) == w);
  CHECK(CodeOf([&] { LoadWeightsFor(path, DecoderArchitecture()); }) == ErrorCode::kFingerprintMismatch);
  std::filesystem::remove(path);
  CHECK(CodeOf([&] { load_weights(path); }) == ErrorCode::kIo);
}

TEST_CASE("Malformed weight files fail with specific errors") {
  ModelWeights w;
  w.fingerprint = 5;
  w.blobs[0] = {1.0f, 2.0f, 3.0f};
  const auto good = SerializeWeights(w);

  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(CodeOf([&] { ParseWeights(bad_magic); }) == ErrorCode::kBadMagic);

  auto bad_version = good;
  bad_version[4] = 2;
  CHECK(CodeOf([&] { ParseWeights(bad_version); }) == ErrorCode::kUnsupportedVersion);

  for (std::size_t cut : {5u, 10u, 17u, 22u, 30u}) {
    const std::vector<std::uint8_t> truncated(good.begin(), good.begin() + cut);
    CHECK(CodeOf([&] { ParseWeights(truncated); }) == ErrorCode::kTruncated);
  }

  auto odd_blob = good;
  odd_blob[22] = 11;  // byte length not a multiple of 4
  CHECK(CodeOf([&] { ParseWeights(odd_blob); }) == ErrorCode::kBlobSize);

  auto trailing = good;
  trailing.push_back(0);
  CHECK(CodeOf([&] { ParseWeights(trailing); }) == ErrorCode::kFormat);

  ModelWeights two = w;
  two.blobs[1] = {4.0f};
  auto dup = SerializeWeights(two);
  dup[18 + 8 + 12] = 0;  // second blob claims layer 0 too
  CHECK(CodeOf([&] { ParseWeights(dup); }) == ErrorCode::kFormat);
}

TEST_CASE("Blob sizes are checked against the architecture on load") {
  const auto arch = DecoderArchitecture();
  ModelWeights w = RandomWeights(arch, 3);
  w.blobs.begin()->second.push_back(0.0f);
  const auto path = TempPath("dec_bad.pgwt");
  save_weights(w, path);
  CHECK(CodeOf([&] { LoadWeightsFor(path, arch); }) == ErrorCode::kBlobSize);
  std::filesystem::remove(path);
}
