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

#include <algorithm>
#include <string>

#include "bimlab/errors.hpp"
#include "bimlab/nn/tensor.hpp"

namespace bimlab::nn {

Tensor conv2d(const Tensor& input, const ConvLayer& layer) {
  require(input.channels == layer.in_channels, "conv2d: input has " + std::to_string(input.channels) +
                                                   " channels, layer expects " + std::to_string(layer.in_channels));
  require(layer.kernel_h % 2 == 1 && layer.kernel_w % 2 == 1, "conv2d: kernel sides must be odd");
  require(layer.weight.size() == std::size_t(layer.out_channels) * layer.in_channels * layer.kernel_h * layer.kernel_w &&
              layer.bias.size() == std::size_t(layer.out_channels),
          "conv2d: layer storage does not match its shape");

  const int h = input.height;
  const int w = input.width;
  const int ph = layer.kernel_h / 2;
  const int pw = layer.kernel_w / 2;
  Tensor out(layer.out_channels, h, w);

  for (int o = 0; o < layer.out_channels; ++o) {
    float* dst = out.channel(o);
    std::fill(dst, dst + out.plane(), layer.bias[std::size_t(o)]);
    for (int i = 0; i < layer.in_channels; ++i) {
      const float* src = input.channel(i);
      for (int ky = 0; ky < layer.kernel_h; ++ky) {
        const int dy = ky - ph;
        const int y_lo = std::max(0, -dy);
        const int y_hi = std::min(h, h - dy);
        for (int kx = 0; kx < layer.kernel_w; ++kx) {
          const int dx = kx - pw;
          const int x_lo = std::max(0, -dx);
          const int x_hi = std::min(w, w - dx);
          const float k = layer.w(o, i, ky, kx);
          if (k == 0.0f) continue;
          for (int y = y_lo; y < y_hi; ++y) {
            float* row = dst + std::size_t(y) * w;
            const float* in_row = src + std::size_t(y + dy) * w + dx;
            for (int x = x_lo; x < x_hi; ++x) row[x] += k * in_row[x];
          }
        }
      }
    }
  }
  return out;
}

Tensor maxpool2(const Tensor& input) {
  require(input.height % 2 == 0 && input.width % 2 == 0, "maxpool2: height and width must be even");
  Tensor out(input.channels, input.height / 2, input.width / 2);
  for (int c = 0; c < input.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        out.at(c, y, x) = std::max(std::max(input.at(c, 2 * y, 2 * x), input.at(c, 2 * y, 2 * x + 1)),
                                   std::max(input.at(c, 2 * y + 1, 2 * x), input.at(c, 2 * y + 1, 2 * x + 1)));
  return out;
}

Tensor upconv2(const Tensor& input, const ConvLayer& layer) {
  require(layer.kernel_h == 2 && layer.kernel_w == 2, "upconv2: kernel must be 2x2");
  require(input.channels == layer.in_channels, "upconv2: input has " + std::to_string(input.channels) +
                                                   " channels, layer expects " + std::to_string(layer.in_channels));
  require(layer.weight.size() == std::size_t(layer.out_channels) * layer.in_channels * 4 &&
              layer.bias.size() == std::size_t(layer.out_channels),
          "upconv2: layer storage does not match its shape");

  Tensor out(layer.out_channels, 2 * input.height, 2 * input.width);
  for (int o = 0; o < layer.out_channels; ++o) {
    float* dst = out.channel(o);
    std::fill(dst, dst + out.plane(), layer.bias[std::size_t(o)]);
    for (int i = 0; i < layer.in_channels; ++i) {
      const float* src = input.channel(i);
      for (int ky = 0; ky < 2; ++ky)
        for (int kx = 0; kx < 2; ++kx) {
          const float k = layer.w(o, i, ky, kx);
          for (int y = 0; y < input.height; ++y) {
            float* row = dst + std::size_t(2 * y + ky) * out.width + kx;
            const float* in_row = src + std::size_t(y) * input.width;
            for (int x = 0; x < input.width; ++x) row[2 * x] += k * in_row[x];
          }
        }
    }
  }
  return out;
}

void relu_inplace(Tensor& t) {
  for (auto& v : t.data) v = v > 0.0f ? v : 0.0f;
}

Tensor concat_channels(const Tensor& first, const Tensor& second) {
  require(first.height == second.height && first.width == second.width, "concat_channels: spatial sizes differ");
  Tensor out(first.channels + second.channels, first.height, first.width);
  std::copy(first.data.begin(), first.data.end(), out.data.begin());
  std::copy(second.data.begin(), second.data.end(), out.data.begin() + std::ptrdiff_t(first.data.size()));
  return out;
}

}  // namespace bimlab::nn
