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

#ifndef SWBCODEC_NN_H_
#define SWBCODEC_NN_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace swbcodec::nn {

// Dense float tensor, row-major. Shapes are (channels, time) for the
// generator and (channels, freq, time) for the discriminator.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<float> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> dims, float fill = 0.0f);
  Tensor(std::vector<std::size_t> dims, std::vector<float> values);

  std::size_t rank() const { return shape.size(); }
  std::size_t channels() const { return shape.empty() ? 0 : shape[0]; }
  // Last dimension.
  std::size_t time() const { return shape.empty() ? 0 : shape.back(); }
  // Elements per channel.
  std::size_t plane() const { return channels() == 0 ? 0 : data.size() / channels(); }

  std::span<float> channel(std::size_t c) { return {data.data() + c * plane(), plane()}; }
  std::span<const float> channel(std::size_t c) const {
    return {data.data() + c * plane(), plane()};
  }
  bool AllFinite() const;
};

// Numeric codes are part of the weight-file fingerprint; do not renumber.
enum class LayerKind : std::int32_t {
  kConv1d = 1,
  kConv2d = 2,
  kResidualUnit = 3,
  kAvgPool = 4,
  kRepeatUpsample = 5,
  kTanh = 6,
  kElu = 7,
};

std::string LayerKindName(LayerKind kind);

struct LayerSpec {
  LayerKind kind = LayerKind::kElu;
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 1;
  // Conv2d stride, pooling rate or repeat factor.
  int stride = 1;
  int dilation = 1;
  int groups = 1;

  static LayerSpec Conv1d(int in, int out, int kernel, int dilation = 1,
                          int groups = 1);
  static LayerSpec Conv2d(int in, int out, int stride);
  static LayerSpec ResidualUnit(int channels, int dilation, int groups = 4);
  static LayerSpec AvgPool(int channels, int rate);
  static LayerSpec RepeatUpsample(int channels, int rate);
  static LayerSpec Tanh(int channels);
  static LayerSpec Elu(int channels);

  std::size_t ParameterCount() const;
  bool operator==(const LayerSpec&) const = default;
};

struct ModelArchitecture {
  std::string name;
  std::vector<LayerSpec> layers;
  // Layers whose outputs forward() exposes, in increasing order.
  std::vector<std::size_t> tap_points;

  // FNV-1a 64 over the layer list; see docs/weights_format.md.
  std::uint64_t Fingerprint() const;
  // Throws kConfig on grouping, dilation or channel-chaining violations.
  void Validate() const;
  // Product of avgpool rates divided by product of repeat rates.
  double TimeScale() const;
};

struct ModelWeights {
  std::uint16_t format_version = 1;
  std::uint64_t fingerprint = 0;
  // Parameter blob per parameterized layer, keyed by layer index.
  std::map<std::size_t, std::vector<float>> blobs;

  bool operator==(const ModelWeights&) const = default;
};

// Throws kWeightsIncompatible when the fingerprint or any blob size does
// not match `arch`.
void CheckCompatible(const ModelArchitecture& arch, const ModelWeights& weights);

// Uniform(-a, a) with a = sqrt(3 / fan_in); biases zero.
ModelWeights RandomWeights(const ModelArchitecture& arch, std::uint64_t seed);
ModelWeights ZeroWeights(const ModelArchitecture& arch);

// Causal (left-padded) grouped dilated 1-D convolution. `params` holds the
// weight [out][in/groups][kernel] followed by the bias [out].
Tensor conv1d_causal(const Tensor& x, const LayerSpec& spec,
                     std::span<const float> params);
// 3x3 convolution, zero padding 1, square stride. Weight layout
// [out][in/groups][3][3] then bias.
Tensor conv2d(const Tensor& x, const LayerSpec& spec, std::span<const float> params);
// y = x + PW(ELU(DW(ELU(x)))), DW grouped dilated causal kernel-3 conv and
// PW pointwise. Blob: dw weight, dw bias, pw weight, pw bias.
Tensor grouped_residual_unit(const Tensor& x, const LayerSpec& spec,
                             std::span<const float> params);
Tensor avgpool_down(const Tensor& x, int rate);
Tensor repeat_upsample(const Tensor& x, int rate);
Tensor elu(const Tensor& x);
Tensor tanh(const Tensor& x);

struct ForwardResult {
  Tensor output;
  std::vector<Tensor> taps;
};

ForwardResult forward(const ModelArchitecture& model, const ModelWeights& weights,
                      const Tensor& input);

}  // namespace swbcodec::nn

#endif  // SWBCODEC_NN_H_
