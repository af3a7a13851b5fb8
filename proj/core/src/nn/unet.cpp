// Copyright 2026 The bimlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bimlab/nn/unet.hpp"

#include <cmath>
#include <random>

#include "bimlab/errors.hpp"

namespace bimlab::nn {

std::vector<LayerSpec> layer_specs(const UNetArch& a) {
  const int f1 = a.base_filters, f2 = 2 * a.base_filters, f3 = 4 * a.base_filters;
  const int k = a.kernel;
  return {
      {"enc1.conv1", f1, a.io_channels, k}, {"enc1.conv2", f1, f1, k},
      {"enc2.conv1", f2, f1, k},            {"enc2.conv2", f2, f2, k},
      {"bott.conv1", f3, f2, k},            {"bott.conv2", f3, f3, k},
      {"up1.deconv", f2, f3, 2},            {"dec1.conv1", f2, 2 * f2, k},
      {"dec1.conv2", f2, f2, k},            {"up2.deconv", f1, f2, 2},
      {"dec2.conv1", f1, 2 * f1, k},        {"dec2.conv2", f1, f1, k},
      {"out.conv", a.io_channels, f1, 1},
  };
}

const ConvLayer& UNetWeights::layer(const std::string& name) const {
  auto it = layers.find(name);
  if (it == layers.end()) throw ContractError("U-net weights have no layer '" + name + "'");
  return it->second;
}

void UNetWeights::validate() const {
  require(arch.kernel % 2 == 1 && arch.base_filters > 0 && arch.io_channels > 0, "invalid U-net architecture");
  for (const auto& spec : layer_specs(arch)) {
    const auto& l = layer(spec.name);
    require(l.out_channels == spec.out_channels && l.in_channels == spec.in_channels && l.kernel_h == spec.kernel &&
                l.kernel_w == spec.kernel,
            "layer '" + spec.name + "' does not match the architecture");
    require(l.weight.size() == std::size_t(l.out_channels) * l.in_channels * l.kernel_h * l.kernel_w &&
                l.bias.size() == std::size_t(l.out_channels),
            "layer '" + spec.name + "' storage does not match its shape");
    for (float v : l.weight) require(std::isfinite(v), "layer '" + spec.name + "' has non-finite weights");
    for (float v : l.bias) require(std::isfinite(v), "layer '" + spec.name + "' has non-finite bias");
  }
  require(layers.size() == layer_specs(arch).size(), "U-net weights carry unexpected layers");
}

UNetWeights UNetWeights::zeros(const UNetArch& arch) {
  UNetWeights w{arch, {}};
  for (const auto& s : layer_specs(arch)) w.layers.emplace(s.name, ConvLayer(s.out_channels, s.in_channels, s.kernel, s.kernel));
  return w;
}

UNetWeights UNetWeights::random(std::uint64_t seed, const UNetArch& arch, float gain) {
  UNetWeights w = zeros(arch);
  std::mt19937_64 rng(seed);
  for (const auto& s : layer_specs(arch)) {
    auto& l = w.layers.at(s.name);
    const double fan_in = double(s.in_channels) * s.kernel * s.kernel;
    const double bound = gain * std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto& v : l.weight) v = static_cast<float>(u(rng));
    std::uniform_real_distribution<double> ub(-0.1 * gain, 0.1 * gain);
    for (auto& v : l.bias) v = static_cast<float>(ub(rng));
  }
  return w;
}

namespace {

Tensor conv_relu(const Tensor& x, const ConvLayer& l) {
  Tensor y = conv2d(x, l);
  relu_inplace(y);
  return y;
}

Tensor double_conv(const UNetWeights& w, const Tensor& x, const std::string& block) {
  return conv_relu(conv_relu(x, w.layer(block + ".conv1")), w.layer(block + ".conv2"));
}

}  // namespace

Tensor unet_forward(const UNetWeights& weights, const Tensor& input) {
  require(input.channels == weights.arch.io_channels, "unet_forward: input channel count does not match");
  require(input.height % 4 == 0 && input.width % 4 == 0 && input.height > 0 && input.width > 0,
          "unet_forward: height and width must be positive multiples of 4");

  const Tensor e1 = double_conv(weights, input, "enc1");
  const Tensor e2 = double_conv(weights, maxpool2(e1), "enc2");
  const Tensor b = double_conv(weights, maxpool2(e2), "bott");
  const Tensor d1 = double_conv(weights, concat_channels(e2, upconv2(b, weights.layer("up1.deconv"))), "dec1");
  const Tensor d2 = double_conv(weights, concat_channels(e1, upconv2(d1, weights.layer("up2.deconv"))), "dec2");
  return conv2d(d2, weights.layer("out.conv"));
}

double parity_max_relative_error(const UNetWeights& weights, const ParityVectors& vectors) {
  require(vectors.inputs.size() == vectors.outputs.size(), "parity vectors: input/output counts differ");
  double worst = 0.0;
  for (std::size_t k = 0; k < vectors.inputs.size(); ++k) {
    const Tensor y = unet_forward(weights, vectors.inputs[k]);
    const Tensor& ref = vectors.outputs[k];
    require(y.same_shape(ref), "parity vectors: output shape mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < y.data.size(); ++i) {
      const double d = double(y.data[i]) - double(ref.data[i]);
      num += d * d;
      den += double(ref.data[i]) * double(ref.data[i]);
    }
    const double rel = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace bimlab::nn
