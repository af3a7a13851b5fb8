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

#include <cmath>
#include <fstream>
#include <sstream>

#include "bimlab/errors.hpp"
#include "bimlab/nn/unet.hpp"
#include "bimlab/tensor_io.hpp"
#include "json.hpp"

namespace bimlab::nn {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kWeightsFile = "weights.bin";

json arch_json(const UNetArch& a) {
  return {{"io_channels", a.io_channels}, {"base_filters", a.base_filters}, {"kernel", a.kernel}};
}

UNetArch arch_from_json(const json& j) {
  UNetArch a;
  a.io_channels = j.at("io_channels").get<int>();
  a.base_filters = j.at("base_filters").get<int>();
  a.kernel = j.at("kernel").get<int>();
  return a;
}

void expect_shape(const io::TensorEntry& e, const std::vector<std::int64_t>& shape) {
  if (e.shape != shape) {
    std::string want, got;
    for (auto d : shape) want += std::to_string(d) + " ";
    for (auto d : e.shape) got += std::to_string(d) + " ";
    throw LoadError(LoadErrorKind::shape_mismatch,
                    "shape mismatch for tensor '" + e.name + "': expected [ " + want + "] got [ " + got + "]");
  }
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void save_weights(const UNetWeights& weights, const fs::path& dir) {
  weights.validate();
  io::PayloadWriter writer(dir, kWeightsFile);
  for (const auto& spec : layer_specs(weights.arch)) {
    const auto& l = weights.layer(spec.name);
    writer.add(spec.name + ".weight", {l.out_channels, l.in_channels, l.kernel_h, l.kernel_w},
               std::span<const float>(l.weight));
    writer.add(spec.name + ".bias", {l.out_channels}, std::span<const float>(l.bias));
  }
  io::Manifest m;
  m.tensors = writer.finish();
  m.extra = json{{"format", "bimlab-unet"}, {"architecture", arch_json(weights.arch)}}.dump();
  io::write_manifest(dir / "manifest.json", m);
}

UNetWeights load_weights(const fs::path& dir, const UNetArch& arch) {
  const io::Manifest m = io::read_manifest(dir / "manifest.json");
  UNetWeights w = UNetWeights::zeros(arch);
  for (const auto& spec : layer_specs(arch)) {
    auto& l = w.layers.at(spec.name);
    const auto& we = m.find(spec.name + ".weight");
    const auto& be = m.find(spec.name + ".bias");
    if (we.dtype != io::DType::float32 || be.dtype != io::DType::float32)
      throw LoadError(LoadErrorKind::unknown_dtype, "layer '" + spec.name + "' is not float32");
    expect_shape(we, {spec.out_channels, spec.in_channels, spec.kernel, spec.kernel});
    expect_shape(be, {spec.out_channels});
    l.weight = io::read_float32(dir, we);
    l.bias = io::read_float32(dir, be);
    for (float v : l.weight)
      if (!std::isfinite(v)) throw LoadError(LoadErrorKind::malformed, "non-finite value in '" + we.name + "'");
    for (float v : l.bias)
      if (!std::isfinite(v)) throw LoadError(LoadErrorKind::malformed, "non-finite value in '" + be.name + "'");
  }
  return w;
}

void save_weight_set(const std::vector<UNetWeights>& steps, const WeightSetMeta& meta, const fs::path& dir) {
  require(!steps.empty(), "weight set needs at least one step");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    require(steps[i].arch == meta.arch, "weight set step architecture differs from meta");
    save_weights(steps[i], dir / ("step" + std::to_string(i + 1)));
  }
  json j{{"architecture", arch_json(meta.arch)},
         {"training_snr", meta.training_snr},
         {"provenance", meta.provenance},
         {"steps", steps.size()}};
  std::ofstream out(dir / "meta.json");
  if (!out) throw IoError("cannot write " + (dir / "meta.json").string());
  out << j.dump(2) << '\n';
}

WeightSetMeta read_weight_set_meta(const fs::path& dir) {
  WeightSetMeta meta;
  try {
    const json j = json::parse(read_text(dir / "meta.json"));
    meta.arch = arch_from_json(j.at("architecture"));
    meta.training_snr = j.value("training_snr", std::string("unknown"));
    meta.provenance = j.value("provenance", std::string("unknown"));
    meta.steps = j.at("steps").get<int>();
  } catch (const json::exception& e) {
    throw LoadError(LoadErrorKind::malformed, "malformed meta.json in " + dir.string() + ": " + e.what());
  }
  return meta;
}

std::vector<UNetWeights> load_weight_set(const fs::path& dir, int expected_steps) {
  if (!fs::is_directory(dir)) throw IoError("weight set directory " + dir.string() + " does not exist");
  const WeightSetMeta meta = read_weight_set_meta(dir);
  if (meta.steps < expected_steps)
    throw ContractError("weight set has " + std::to_string(meta.steps) + " steps, need " +
                        std::to_string(expected_steps));
  std::vector<UNetWeights> out;
  for (int i = 1; i <= expected_steps; ++i) out.push_back(load_weights(dir / ("step" + std::to_string(i)), meta.arch));
  return out;
}

ParityVectors load_parity_vectors(const fs::path& dir) {
  const io::Manifest m = io::read_manifest(dir / "manifest.json");
  const auto& in = m.find("inputs");
  const auto& out = m.find("outputs");
  if (in.shape.size() != 4) throw LoadError(LoadErrorKind::shape_mismatch, "'inputs' must be (n, C, H, W)");
  expect_shape(out, in.shape);
  const auto xs = io::read_float32(dir, in);
  const auto ys = io::read_float32(dir, out);

  ParityVectors pv;
  const int n = int(in.shape[0]), c = int(in.shape[1]), h = int(in.shape[2]), w = int(in.shape[3]);
  const std::size_t per = std::size_t(c) * h * w;
  for (int k = 0; k < n; ++k) {
    Tensor x(c, h, w), y(c, h, w);
    std::copy_n(xs.begin() + std::ptrdiff_t(k * per), per, x.data.begin());
    std::copy_n(ys.begin() + std::ptrdiff_t(k * per), per, y.data.begin());
    pv.inputs.push_back(std::move(x));
    pv.outputs.push_back(std::move(y));
  }
  return pv;
}

void save_parity_vectors(const ParityVectors& vectors, const fs::path& dir) {
  require(!vectors.inputs.empty() && vectors.inputs.size() == vectors.outputs.size(), "parity vectors are empty");
  const Tensor& first = vectors.inputs.front();
  std::vector<float> xs, ys;
  for (std::size_t k = 0; k < vectors.inputs.size(); ++k) {
    require(vectors.inputs[k].same_shape(first) && vectors.outputs[k].same_shape(first),
            "parity vectors must share one shape");
    xs.insert(xs.end(), vectors.inputs[k].data.begin(), vectors.inputs[k].data.end());
    ys.insert(ys.end(), vectors.outputs[k].data.begin(), vectors.outputs[k].data.end());
  }
  const std::vector<std::int64_t> shape{std::int64_t(vectors.inputs.size()), first.channels, first.height,
                                        first.width};
  io::PayloadWriter win(dir, "inputs.bin");
  win.add("inputs", shape, std::span<const float>(xs));
  io::PayloadWriter wout(dir, "outputs.bin");
  wout.add("outputs", shape, std::span<const float>(ys));
  io::Manifest m;
  m.tensors = win.finish();
  const auto& e = wout.finish();
  m.tensors.insert(m.tensors.end(), e.begin(), e.end());
  m.extra = json{{"format", "bimlab-parity"}}.dump();
  io::write_manifest(dir / "manifest.json", m);
}

}  // namespace bimlab::nn
