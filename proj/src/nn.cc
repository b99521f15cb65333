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

#include "swbcodec/nn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "swbcodec/error.h"

namespace swbcodec::nn {
namespace {

std::size_t Product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string ShapeString(const std::vector<std::size_t>& dims) {
  std::string s = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(dims[i]);
  }
  return s + ")";
}

void CheckChannels(const Tensor& x, const LayerSpec& spec) {
  Require(static_cast<int>(x.channels()) == spec.in_channels, ErrorCode::kShape,
          LayerKindName(spec.kind) + " expects " + std::to_string(spec.in_channels) +
              " input channels, got tensor " + ShapeString(x.shape));
}

void CheckParams(const LayerSpec& spec, std::span<const float> params) {
  Require(params.size() == spec.ParameterCount(), ErrorCode::kWeightsIncompatible,
          LayerKindName(spec.kind) + " expects " +
              std::to_string(spec.ParameterCount()) + " parameters, got " +
              std::to_string(params.size()));
}

float EluScalar(float v) { return v > 0.0f ? v : std::expm1(v); }

}  // namespace

Tensor::Tensor(std::vector<std::size_t> dims, float fill)
    : shape(std::move(dims)), data(Product(shape), fill) {}

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<float> values)
    : shape(std::move(dims)), data(std::move(values)) {
  Require(data.size() == Product(shape), ErrorCode::kShape,
          "tensor data length " + std::to_string(data.size()) +
              " does not match shape " + ShapeString(shape));
}

bool Tensor::AllFinite() const {
  return std::all_of(data.begin(), data.end(),
                     [](float v) { return std::isfinite(v); });
}

std::string LayerKindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv1d: return "conv1d";
    case LayerKind::kConv2d: return "conv2d";
    case LayerKind::kResidualUnit: return "residual-unit";
    case LayerKind::kAvgPool: return "avgpool";
    case LayerKind::kRepeatUpsample: return "repeat-upsample";
    case LayerKind::kTanh: return "tanh";
    case LayerKind::kElu: return "elu";
  }
  return "unknown";
}

LayerSpec LayerSpec::Conv1d(int in, int out, int kernel, int dilation, int groups) {
  return {LayerKind::kConv1d, in, out, kernel, 1, dilation, groups};
}
LayerSpec LayerSpec::Conv2d(int in, int out, int stride) {
  return {LayerKind::kConv2d, in, out, 3, stride, 1, 1};
}
LayerSpec LayerSpec::ResidualUnit(int channels, int dilation, int groups) {
  return {LayerKind::kResidualUnit, channels, channels, 3, 1, dilation, groups};
}
LayerSpec LayerSpec::AvgPool(int channels, int rate) {
  return {LayerKind::kAvgPool, channels, channels, 1, rate, 1, 1};
}
LayerSpec LayerSpec::RepeatUpsample(int channels, int rate) {
  return {LayerKind::kRepeatUpsample, channels, channels, 1, rate, 1, 1};
}
LayerSpec LayerSpec::Tanh(int channels) {
  return {LayerKind::kTanh, channels, channels, 1, 1, 1, 1};
}
LayerSpec LayerSpec::Elu(int channels) {
  return {LayerKind::kElu, channels, channels, 1, 1, 1, 1};
}

std::size_t LayerSpec::ParameterCount() const {
  const auto in = static_cast<std::size_t>(in_channels);
  const auto out = static_cast<std::size_t>(out_channels);
  const auto g = static_cast<std::size_t>(std::max(groups, 1));
  const auto k = static_cast<std::size_t>(kernel);
  switch (kind) {
    case LayerKind::kConv1d: return out * (in / g) * k + out;
    case LayerKind::kConv2d: return out * (in / g) * 9 + out;
    case LayerKind::kResidualUnit: return in * (in / g) * k + in + in * in + in;
    default: return 0;
  }
}

std::uint64_t ModelArchitecture::Fingerprint() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](std::int32_t value) {
    const auto u = static_cast<std::uint32_t>(value);
    for (int shift = 0; shift < 32; shift += 8) {
      hash ^= (u >> shift) & 0xffu;
      hash *= 0x100000001b3ULL;
    }
  };
  for (const auto& l : layers) {
    mix(static_cast<std::int32_t>(l.kind));
    mix(l.in_channels);
    mix(l.out_channels);
    mix(l.kernel);
    mix(l.stride);
    mix(l.dilation);
    mix(l.groups);
  }
  return hash;
}

void ModelArchitecture::Validate() const {
  Require(!layers.empty(), ErrorCode::kConfig, name + ": no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const std::string where = name + " layer " + std::to_string(i) + " (" +
                              LayerKindName(l.kind) + ")";
    Require(l.in_channels > 0 && l.out_channels > 0, ErrorCode::kConfig,
            where + ": channel counts must be positive");
    Require(l.groups >= 1 && l.in_channels % l.groups == 0 &&
                l.out_channels % l.groups == 0,
            ErrorCode::kConfig, where + ": channels not divisible by groups");
    if (l.kind == LayerKind::kResidualUnit) {
      Require(l.in_channels == l.out_channels, ErrorCode::kConfig,
              where + ": residual unit must preserve channels");
      Require(l.dilation == 1 || l.dilation == 3 || l.dilation == 9,
              ErrorCode::kConfig, where + ": dilation must be 1, 3 or 9");
    }
    if (l.kind != LayerKind::kConv1d && l.kind != LayerKind::kConv2d) {
      Require(l.in_channels == l.out_channels, ErrorCode::kConfig,
              where + ": layer must preserve channels");
    }
    Require(l.stride >= 1 && l.kernel >= 1 && l.dilation >= 1, ErrorCode::kConfig,
            where + ": kernel, stride and dilation must be >= 1");
    if (i > 0) {
      Require(layers[i - 1].out_channels == l.in_channels, ErrorCode::kConfig,
              where + ": input channels do not chain from previous layer");
    }
  }
  for (std::size_t t = 0; t < tap_points.size(); ++t) {
    Require(tap_points[t] < layers.size(), ErrorCode::kConfig,
            name + ": tap point out of range");
    Require(t == 0 || tap_points[t] > tap_points[t - 1], ErrorCode::kConfig,
            name + ": tap points must be increasing");
  }
}

double ModelArchitecture::TimeScale() const {
  double scale = 1.0;
  for (const auto& l : layers) {
    if (l.kind == LayerKind::kAvgPool) scale *= l.stride;
    if (l.kind == LayerKind::kRepeatUpsample) scale /= l.stride;
  }
  return scale;
}

void CheckCompatible(const ModelArchitecture& arch, const ModelWeights& weights) {
  const std::uint64_t expected = arch.Fingerprint();
  Require(weights.fingerprint == expected, ErrorCode::kWeightsIncompatible,
          arch.name + ": weights fingerprint does not match architecture");
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const std::size_t count = arch.layers[i].ParameterCount();
    auto it = weights.blobs.find(i);
    if (count == 0) {
      Require(it == weights.blobs.end(), ErrorCode::kWeightsIncompatible,
              arch.name + ": unexpected parameters for layer " + std::to_string(i));
      continue;
    }
    Require(it != weights.blobs.end() && it->second.size() == count,
            ErrorCode::kWeightsIncompatible,
            arch.name + ": layer " + std::to_string(i) + " needs " +
                std::to_string(count) + " parameters");
  }
  Require(weights.blobs.empty() || weights.blobs.rbegin()->first < arch.layers.size(),
          ErrorCode::kWeightsIncompatible, arch.name + ": blob for unknown layer");
}

namespace {

// Fills [weight..., bias...] of a conv-like parameter group.
void InitConv(std::mt19937_64& rng, std::size_t out, std::size_t fan_in,
              std::vector<float>& blob) {
  const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
  for (std::size_t i = 0; i < out * fan_in; ++i) {
    // 53-bit mantissa uniform in [0, 1), independent of the standard library.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    blob.push_back(static_cast<float>((2.0 * u - 1.0) * bound));
  }
  blob.insert(blob.end(), out, 0.0f);
}

}  // namespace

ModelWeights RandomWeights(const ModelArchitecture& arch, std::uint64_t seed) {
  arch.Validate();
  ModelWeights w;
  w.fingerprint = arch.Fingerprint();
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const auto& l = arch.layers[i];
    const auto in = static_cast<std::size_t>(l.in_channels);
    const auto out = static_cast<std::size_t>(l.out_channels);
    const auto g = static_cast<std::size_t>(l.groups);
    const auto k = static_cast<std::size_t>(l.kernel);
    std::vector<float> blob;
    switch (l.kind) {
      case LayerKind::kConv1d: InitConv(rng, out, in / g * k, blob); break;
      case LayerKind::kConv2d: InitConv(rng, out, in / g * 9, blob); break;
      case LayerKind::kResidualUnit:
        InitConv(rng, in, in / g * k, blob);
        InitConv(rng, in, in, blob);
        break;
      default: continue;
    }
    w.blobs.emplace(i, std::move(blob));
  }
  return w;
}

ModelWeights ZeroWeights(const ModelArchitecture& arch) {
  ModelWeights w;
  w.fingerprint = arch.Fingerprint();
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const std::size_t count = arch.layers[i].ParameterCount();
    if (count > 0) w.blobs.emplace(i, std::vector<float>(count, 0.0f));
  }
  return w;
}

Tensor conv1d_causal(const Tensor& x, const LayerSpec& spec,
                     std::span<const float> params) {
  Require(x.rank() == 2, ErrorCode::kShape, "conv1d expects a (channels, time) tensor");
  CheckChannels(x, spec);
  CheckParams(spec, params);
  const std::size_t steps = x.time();
  const auto out_ch = static_cast<std::size_t>(spec.out_channels);
  const auto groups = static_cast<std::size_t>(spec.groups);
  const std::size_t in_per_group = static_cast<std::size_t>(spec.in_channels) / groups;
  const std::size_t out_per_group = out_ch / groups;
  const auto kernel = static_cast<std::size_t>(spec.kernel);
  const auto dilation = static_cast<std::size_t>(spec.dilation);
  const float* weight = params.data();
  const float* bias = params.data() + out_ch * in_per_group * kernel;

  Tensor y({out_ch, steps});
  for (std::size_t o = 0; o < out_ch; ++o) {
    const std::size_t g = o / out_per_group;
    float* row = y.channel(o).data();
    std::fill(row, row + steps, bias[o]);
    for (std::size_t i = 0; i < in_per_group; ++i) {
      const float* in = x.channel(g * in_per_group + i).data();
      const float* w = weight + (o * in_per_group + i) * kernel;
      for (std::size_t k = 0; k < kernel; ++k) {
        // Tap k looks back (kernel - 1 - k) * dilation steps.
        const std::size_t shift = (kernel - 1 - k) * dilation;
        const float wk = w[k];
        for (std::size_t t = shift; t < steps; ++t) row[t] += wk * in[t - shift];
      }
    }
  }
  return y;
}

Tensor conv2d(const Tensor& x, const LayerSpec& spec, std::span<const float> params) {
  Require(x.rank() == 3, ErrorCode::kShape,
          "conv2d expects a (channels, freq, time) tensor");
  CheckChannels(x, spec);
  CheckParams(spec, params);
  const std::size_t in_f = x.shape[1];
  const std::size_t in_t = x.shape[2];
  const auto stride = static_cast<std::size_t>(spec.stride);
  const std::size_t out_f = (in_f - 1) / stride + 1;
  const std::size_t out_t = (in_t - 1) / stride + 1;
  const auto out_ch = static_cast<std::size_t>(spec.out_channels);
  const auto groups = static_cast<std::size_t>(spec.groups);
  const std::size_t in_per_group = static_cast<std::size_t>(spec.in_channels) / groups;
  const std::size_t out_per_group = out_ch / groups;
  const float* weight = params.data();
  const float* bias = params.data() + out_ch * in_per_group * 9;

  Tensor y({out_ch, out_f, out_t});
  for (std::size_t o = 0; o < out_ch; ++o) {
    const std::size_t g = o / out_per_group;
    float* plane = y.channel(o).data();
    std::fill(plane, plane + out_f * out_t, bias[o]);
    for (std::size_t i = 0; i < in_per_group; ++i) {
      const float* in = x.channel(g * in_per_group + i).data();
      const float* w = weight + (o * in_per_group + i) * 9;
      for (std::size_t ky = 0; ky < 3; ++ky) {
        for (std::size_t kx = 0; kx < 3; ++kx) {
          const float wk = w[ky * 3 + kx];
          for (std::size_t oy = 0; oy < out_f; ++oy) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * stride + ky) - 1;
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(in_f)) continue;
            const float* in_row = in + static_cast<std::size_t>(iy) * in_t;
            float* out_row = plane + oy * out_t;
            for (std::size_t ox = 0; ox < out_t; ++ox) {
              const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * stride + kx) - 1;
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(in_t)) continue;
              out_row[ox] += wk * in_row[ix];
            }
          }
        }
      }
    }
  }
  return y;
}

Tensor grouped_residual_unit(const Tensor& x, const LayerSpec& spec,
                             std::span<const float> params) {
  Require(spec.in_channels == spec.out_channels, ErrorCode::kConfig,
          "residual unit must preserve channels");
  Require(spec.in_channels % spec.groups == 0, ErrorCode::kConfig,
          "residual unit channels not divisible by groups");
  CheckChannels(x, spec);
  CheckParams(spec, params);
  const LayerSpec dw =
      LayerSpec::Conv1d(spec.in_channels, spec.in_channels, spec.kernel,
                        spec.dilation, spec.groups);
  const LayerSpec pw = LayerSpec::Conv1d(spec.in_channels, spec.in_channels, 1);
  const std::size_t dw_count = dw.ParameterCount();
  Tensor h = conv1d_causal(elu(x), dw, params.first(dw_count));
  h = conv1d_causal(elu(h), pw, params.subspan(dw_count));
  for (std::size_t i = 0; i < h.data.size(); ++i) h.data[i] += x.data[i];
  return h;
}

Tensor avgpool_down(const Tensor& x, int rate) {
  Require(x.rank() == 2, ErrorCode::kShape, "avgpool expects a (channels, time) tensor");
  Require(rate >= 1, ErrorCode::kInvalidArgument, "avgpool rate must be >= 1");
  const auto r = static_cast<std::size_t>(rate);
  Require(x.time() % r == 0, ErrorCode::kInvalidArgument,
          "avgpool: time " + std::to_string(x.time()) + " not divisible by rate " +
              std::to_string(rate));
  const std::size_t steps = x.time() / r;
  Tensor y({x.channels(), steps});
  for (std::size_t c = 0; c < x.channels(); ++c) {
    const float* in = x.channel(c).data();
    float* out = y.channel(c).data();
    for (std::size_t t = 0; t < steps; ++t) {
      float acc = 0.0f;
      for (std::size_t j = 0; j < r; ++j) acc += in[t * r + j];
      out[t] = acc / static_cast<float>(r);
    }
  }
  return y;
}

Tensor repeat_upsample(const Tensor& x, int rate) {
  Require(x.rank() == 2, ErrorCode::kShape, "repeat expects a (channels, time) tensor");
  Require(rate >= 1, ErrorCode::kInvalidArgument, "repeat rate must be >= 1");
  const auto r = static_cast<std::size_t>(rate);
  Tensor y({x.channels(), x.time() * r});
  for (std::size_t c = 0; c < x.channels(); ++c) {
    const float* in = x.channel(c).data();
    float* out = y.channel(c).data();
    for (std::size_t t = 0; t < x.time(); ++t) {
      std::fill(out + t * r, out + (t + 1) * r, in[t]);
    }
  }
  return y;
}

Tensor elu(const Tensor& x) {
  Tensor y = x;
  for (float& v : y.data) v = EluScalar(v);
  return y;
}

Tensor tanh(const Tensor& x) {
  Tensor y = x;
  for (float& v : y.data) v = std::tanh(v);
  return y;
}

ForwardResult forward(const ModelArchitecture& model, const ModelWeights& weights,
                      const Tensor& input) {
  CheckCompatible(model, weights);
  ForwardResult result;
  Tensor x = input;
  std::size_t next_tap = 0;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const auto& l = model.layers[i];
    std::span<const float> params;
    if (auto it = weights.blobs.find(i); it != weights.blobs.end()) params = it->second;
    switch (l.kind) {
      case LayerKind::kConv1d: x = conv1d_causal(x, l, params); break;
      case LayerKind::kConv2d: x = conv2d(x, l, params); break;
      case LayerKind::kResidualUnit: x = grouped_residual_unit(x, l, params); break;
      case LayerKind::kAvgPool:
        CheckChannels(x, l);
        x = avgpool_down(x, l.stride);
        break;
      case LayerKind::kRepeatUpsample:
        CheckChannels(x, l);
        x = repeat_upsample(x, l.stride);
        break;
      case LayerKind::kTanh:
        CheckChannels(x, l);
        x = tanh(x);
        break;
      case LayerKind::kElu:
        CheckChannels(x, l);
        x = elu(x);
        break;
    }
    if (next_tap < model.tap_points.size() && model.tap_points[next_tap] == i) {
      result.taps.push_back(x);
      ++next_tap;
    }
  }
  result.output = std::move(x);
  return result;
}

}  // namespace swbcodec::nn
