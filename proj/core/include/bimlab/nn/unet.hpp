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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bimlab/nn/tensor.hpp"

namespace bimlab::nn {

/// Two-level U-net: 3x3 same-padded convolutions with rectifiers, 2x2 max
/// pooling, 2x2 stride-2 up-convolutions (linear), skip concatenation with the
/// skip channels first, and a linear 1x1 output head.
struct UNetArch {
  int io_channels = 2;
  int base_filters = 16;  ///< encoder 1; encoder 2 and bottleneck use 2x and 4x
  int kernel = 3;

  bool operator==(const UNetArch&) const = default;
};

struct LayerSpec {
  std::string name;
  int out_channels;
  int in_channels;
  int kernel;
};

/// Layers in their canonical order: enc1.conv1 ... out.conv.
std::vector<LayerSpec> layer_specs(const UNetArch& arch);

struct UNetWeights {
  UNetArch arch;
  std::map<std::string, ConvLayer> layers;

  const ConvLayer& layer(const std::string& name) const;
  /// Throws ContractError if any layer is absent, misshapen or non-finite.
  void validate() const;

  static UNetWeights zeros(const UNetArch& arch = {});
  /// He-style uniform initialization, deterministic per seed.
  static UNetWeights random(std::uint64_t seed, const UNetArch& arch = {}, float gain = 1.0f);
};

/// Full network evaluation. Height and width must be divisible by 4.
Tensor unet_forward(const UNetWeights& weights, const Tensor& input);

// Weight bundle: {manifest.json, weights.bin}, tensors "<layer>.weight" with
// shape (out, in, kh, kw) and "<layer>.bias" with shape (out), float32.
void save_weights(const UNetWeights& weights, const std::filesystem::path& dir);
/// Throws LoadError with kind missing_tensor, shape_mismatch, truncated_payload,
/// unknown_dtype or malformed.
UNetWeights load_weights(const std::filesystem::path& dir, const UNetArch& arch = {});

/// Per-step bundle set for a trained reconstruction: {step1/, step2/, ...} plus meta.json.
struct WeightSetMeta {
  UNetArch arch;
  std::string training_snr = "noiseless";
  std::string provenance = "unknown";
  int steps = 0;
};
void save_weight_set(const std::vector<UNetWeights>& steps, const WeightSetMeta& meta,
                     const std::filesystem::path& dir);
std::vector<UNetWeights> load_weight_set(const std::filesystem::path& dir, int expected_steps);
WeightSetMeta read_weight_set_meta(const std::filesystem::path& dir);

/// Reference input/output pairs exported by the training side:
/// {manifest.json, inputs.bin, outputs.bin} with tensors "inputs" and "outputs" of shape (n, C, H, W).
struct ParityVectors {
  std::vector<Tensor> inputs;
  std::vector<Tensor> outputs;
};
ParityVectors load_parity_vectors(const std::filesystem::path& dir);
void save_parity_vectors(const ParityVectors& vectors, const std::filesystem::path& dir);

/// Largest per-pair relative error ||y - y_ref|| / ||y_ref|| of unet_forward against the stored outputs.
double parity_max_relative_error(const UNetWeights& weights, const ParityVectors& vectors);

}  // namespace bimlab::nn
