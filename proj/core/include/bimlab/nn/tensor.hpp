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

#include <cstddef>
#include <vector>

namespace bimlab::nn {

/// Dense float32 feature map, channel-major then row-major: (c, y, x).
struct Tensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  Tensor() = default;
  Tensor(int c, int h, int w, float fill = 0.0f)
      : channels(c), height(h), width(w), data(std::size_t(c) * std::size_t(h) * std::size_t(w), fill) {}

  std::size_t plane() const { return std::size_t(height) * std::size_t(width); }
  std::size_t index(int c, int y, int x) const { return std::size_t(c) * plane() + std::size_t(y) * width + x; }
  float& at(int c, int y, int x) { return data[index(c, y, x)]; }
  float at(int c, int y, int x) const { return data[index(c, y, x)]; }
  float* channel(int c) { return data.data() + std::size_t(c) * plane(); }
  const float* channel(int c) const { return data.data() + std::size_t(c) * plane(); }

  bool same_shape(const Tensor& o) const { return channels == o.channels && height == o.height && width == o.width; }
};

/// Kernel (out, in, kh, kw) and bias (out). Also used for 2x2 up-convolutions.
struct ConvLayer {
  int out_channels = 0;
  int in_channels = 0;
  int kernel_h = 0;
  int kernel_w = 0;
  std::vector<float> weight;
  std::vector<float> bias;

  ConvLayer() = default;
  ConvLayer(int out, int in, int kh, int kw)
      : out_channels(out),
        in_channels(in),
        kernel_h(kh),
        kernel_w(kw),
        weight(std::size_t(out) * in * kh * kw, 0.0f),
        bias(std::size_t(out), 0.0f) {}

  float& w(int o, int i, int ky, int kx) {
    return weight[((std::size_t(o) * in_channels + i) * kernel_h + ky) * kernel_w + kx];
  }
  float w(int o, int i, int ky, int kx) const {
    return weight[((std::size_t(o) * in_channels + i) * kernel_h + ky) * kernel_w + kx];
  }
};

/// Stride-1 cross-correlation with zero "same" padding. Kernel sides must be odd.
Tensor conv2d(const Tensor& input, const ConvLayer& layer);

/// 2x2 max pooling, stride 2. Height and width must be even.
Tensor maxpool2(const Tensor& input);

/// 2x2 stride-2 transposed convolution; doubles height and width.
Tensor upconv2(const Tensor& input, const ConvLayer& layer);

/// In-place max(0, x).
void relu_inplace(Tensor& t);

/// Channel concatenation; first's channels come first.
Tensor concat_channels(const Tensor& first, const Tensor& second);

}  // namespace bimlab::nn
