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

#ifndef SWBCODEC_ARCHITECTURES_H_
#define SWBCODEC_ARCHITECTURES_H_

#include <array>
#include <cstddef>

#include "swbcodec/nn.h"

namespace swbcodec {

inline constexpr int kEmbeddingDims = 40;
inline constexpr int kBaseChannels = 16;
inline constexpr int kPreprocessRate = 2;
inline constexpr std::array<int, 4> kDownsampleRates = {2, 4, 4, 5};
inline constexpr std::array<int, 3> kResidualDilations = {1, 3, 9};
// Samples per embedding: 2 * 2 * 4 * 4 * 5.
inline constexpr std::size_t kSamplesPerEmbedding = 320;

inline constexpr int kStudentUnitsPerBlock = 3;
inline constexpr int kTeacherUnitsPerBlock = 6;

// conv(1->16) | ELU, conv(16->16), pool 2 | per rate r: residual units
// (dilations 1, 3, 9 cycled), ELU, pool r, conv(C->2C) | ELU, conv(256->D),
// tanh. Taps: end of the pre-processing block, end of every downsampling
// block, the embedding.
nn::ModelArchitecture EncoderArchitecture(int units_per_block = kStudentUnitsPerBlock,
                                          int embedding_dims = kEmbeddingDims);

// Mirror of the encoder with repeat upsampling at rates 5, 4, 4, 2 and a
// final post-processing repeat of 2. Taps: the input projection, end of
// every upsampling block, end of the post-processing block, the output.
nn::ModelArchitecture DecoderArchitecture(int units_per_block = kStudentUnitsPerBlock,
                                          int embedding_dims = kEmbeddingDims);

// Deeper generator with the same block-boundary shapes as the student.
nn::ModelArchitecture TeacherEncoderArchitecture();
nn::ModelArchitecture TeacherDecoderArchitecture();

inline constexpr std::array<int, 8> kDiscriminatorChannels = {2, 16, 32, 64, 64, 64, 32, 1};
inline constexpr std::array<int, 7> kDiscriminatorStrides = {1, 2, 1, 2, 1, 2, 1};

// Seven 3x3 conv2d layers with ELU between them over a (2, bins, frames)
// input. Every conv layer's output (post-activation except the last) is a tap.
nn::ModelArchitecture DiscriminatorArchitecture(std::size_t fft_size);

}  // namespace swbcodec

#endif  // SWBCODEC_ARCHITECTURES_H_
