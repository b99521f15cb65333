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

#include "swbcodec/architectures.h"

#include <string>

#include "swbcodec/error.h"

namespace swbcodec {

using nn::LayerSpec;
using nn::ModelArchitecture;

namespace {

void AddResidualUnits(ModelArchitecture& arch, int channels, int count) {
  for (int u = 0; u < count; ++u) {
    arch.layers.push_back(LayerSpec::ResidualUnit(
        channels, kResidualDilations[static_cast<std::size_t>(u) % kResidualDilations.size()]));
  }
}

void MarkTap(ModelArchitecture& arch) { arch.tap_points.push_back(arch.layers.size() - 1); }

}  // namespace

ModelArchitecture EncoderArchitecture(int units_per_block, int embedding_dims) {
  Require(units_per_block >= 1, ErrorCode::kConfig, "need at least one residual unit");
  ModelArchitecture arch;
  arch.name = units_per_block == kStudentUnitsPerBlock ? "encoder" : "teacher_encoder";
  int ch = kBaseChannels;
  arch.layers.push_back(LayerSpec::Conv1d(1, ch, 3));
  arch.layers.push_back(LayerSpec::Elu(ch));
  arch.layers.push_back(LayerSpec::Conv1d(ch, ch, 3));
  arch.layers.push_back(LayerSpec::AvgPool(ch, kPreprocessRate));
  MarkTap(arch);
  for (int rate : kDownsampleRates) {
    AddResidualUnits(arch, ch, units_per_block);
    arch.layers.push_back(LayerSpec::Elu(ch));
    arch.layers.push_back(LayerSpec::AvgPool(ch, rate));
    arch.layers.push_back(LayerSpec::Conv1d(ch, 2 * ch, 3));
    ch *= 2;
    MarkTap(arch);
  }
  arch.layers.push_back(LayerSpec::Elu(ch));
  arch.layers.push_back(LayerSpec::Conv1d(ch, embedding_dims, 3));
  arch.layers.push_back(LayerSpec::Tanh(embedding_dims));
  MarkTap(arch);
  arch.Validate();
  return arch;
}

ModelArchitecture DecoderArchitecture(int units_per_block, int embedding_dims) {
  Require(units_per_block >= 1, ErrorCode::kConfig, "need at least one residual unit");
  ModelArchitecture arch;
  arch.name = units_per_block == kStudentUnitsPerBlock ? "decoder" : "teacher_decoder";
  int ch = kBaseChannels;
  for (std::size_t i = 0; i < kDownsampleRates.size(); ++i) ch *= 2;
  arch.layers.push_back(LayerSpec::Conv1d(embedding_dims, ch, 3));
  MarkTap(arch);
  for (auto it = kDownsampleRates.rbegin(); it != kDownsampleRates.rend(); ++it) {
    arch.layers.push_back(LayerSpec::Elu(ch));
    arch.layers.push_back(LayerSpec::RepeatUpsample(ch, *it));
    arch.layers.push_back(LayerSpec::Conv1d(ch, ch / 2, 3));
    ch /= 2;
    AddResidualUnits(arch, ch, units_per_block);
    MarkTap(arch);
  }
  arch.layers.push_back(LayerSpec::Elu(ch));
  arch.layers.push_back(LayerSpec::RepeatUpsample(ch, kPreprocessRate));
  arch.layers.push_back(LayerSpec::Conv1d(ch, ch, 3));
  MarkTap(arch);
  arch.layers.push_back(LayerSpec::Elu(ch));
  arch.layers.push_back(LayerSpec::Conv1d(ch, 1, 3));
  MarkTap(arch);
  arch.Validate();
  return arch;
}

ModelArchitecture TeacherEncoderArchitecture() {
  return EncoderArchitecture(kTeacherUnitsPerBlock);
}

ModelArchitecture TeacherDecoderArchitecture() {
  return DecoderArchitecture(kTeacherUnitsPerBlock);
}

ModelArchitecture DiscriminatorArchitecture(std::size_t fft_size) {
  ModelArchitecture arch;
  arch.name = "discriminator_" + std::to_string(fft_size);
  for (std::size_t i = 0; i < kDiscriminatorStrides.size(); ++i) {
    arch.layers.push_back(LayerSpec::Conv2d(kDiscriminatorChannels[i],
                                            kDiscriminatorChannels[i + 1],
                                            kDiscriminatorStrides[i]));
    if (i + 1 < kDiscriminatorStrides.size()) {
      arch.layers.push_back(LayerSpec::Elu(kDiscriminatorChannels[i + 1]));
    }
    MarkTap(arch);
  }
  arch.Validate();
  return arch;
}

}  // namespace swbcodec
