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


#include "bimlab/errors.hpp"
#include "bimlab/nn/tensor.hpp"
#include "doctest.h"
#include "support/nn_oracles.hpp"

using namespace bimlab;
using namespace bimlab::nn;

using testing::naive_conv;
using testing::random_layer;
using testing::random_tensor;
using testing::rel_diff;

TEST_CASE("conv2d identities") {
  std::mt19937_64 rng(1);
  const Tensor x = random_tensor(1, 5, 7, rng);
  ConvLayer one(1, 1, 1, 1);
  one.weight[0] = 1.0f;
  CHECK(conv2d(x, one).data == x.data);

  ConvLayer zero(3, 1, 3, 3);
  zero.bias = {0.5f, -1.0f, 2.0f};
  const Tensor y = conv2d(x, zero);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 35; ++i) CHECK(y.data[std::size_t(c) * 35 + i] == zero.bias[std::size_t(c)]);
}

TEST_CASE("conv2d matches the direct-sum oracle") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const Tensor x = random_tensor(3, 8, 8, rng);
    const ConvLayer l = random_layer(4, 3, 3, rng);
    CHECK(rel_diff(conv2d(x, l), naive_conv(x, l)) < 1e-6);
  }
  const Tensor x = random_tensor(2, 6, 10, rng);
  const ConvLayer l5 = random_layer(3, 2, 5, rng);
  CHECK(rel_diff(conv2d(x, l5), naive_conv(x, l5)) < 1e-6);
}

TEST_CASE("conv2d contract errors") {
  Tensor x(2, 4, 4);
  CHECK_THROWS_AS(conv2d(x, ConvLayer(1, 3, 3, 3)), ContractError);
  CHECK_THROWS_AS(conv2d(x, ConvLayer(1, 2, 2, 2)), ContractError);
}

TEST_CASE("maxpool2") {
  Tensor c(2, 4, 6, 3.5f);
  const Tensor p = maxpool2(c);
  CHECK(p.channels == 2);
  CHECK(p.height == 2);
  CHECK(p.width == 3);
  for (float v : p.data) CHECK(v == 3.5f);

  Tensor b(1, 2, 2);
  b.data = {1, 2, 3, 4};
  CHECK(maxpool2(b).data == std::vector<float>{4});

  std::mt19937_64 rng(3);
  const Tensor x = random_tensor(3, 8, 6, rng);
  const Tensor y = maxpool2(x);
  for (int ch = 0; ch < 3; ++ch)
    for (int yy = 0; yy < 4; ++yy)
      for (int xx = 0; xx < 3; ++xx) {
        bool attained = false;
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx) {
            const float v = x.at(ch, 2 * yy + dy, 2 * xx + dx);
            CHECK(y.at(ch, yy, xx) >= v);
            attained = attained || v == y.at(ch, yy, xx);
          }
        CHECK(attained);
      }
  CHECK(y.data == testing::naive_maxpool(x).data);

  CHECK_THROWS_AS(maxpool2(Tensor(1, 3, 4)), ContractError);
}

TEST_CASE("upconv2") {
  Tensor v(1, 1, 1, 2.5f);
  ConvLayer ones(1, 1, 2, 2);
  std::fill(ones.weight.begin(), ones.weight.end(), 1.0f);
  const Tensor y = upconv2(v, ones);
  CHECK(y.height == 2);
  CHECK(y.width == 2);
  for (float x : y.data) CHECK(x == 2.5f);

  ConvLayer zero(2, 1, 2, 2);
  zero.bias = {1.5f, -0.5f};
  std::mt19937_64 rng(4);
  const Tensor z = upconv2(random_tensor(1, 3, 5, rng), zero);
  CHECK(z.height == 6);
  CHECK(z.width == 10);
  for (int i = 0; i < 60; ++i) CHECK(z.data[std::size_t(i)] == 1.5f);
  for (int i = 60; i < 120; ++i) CHECK(z.data[std::size_t(i)] == -0.5f);

  const Tensor x = random_tensor(3, 4, 5, rng);
  const ConvLayer l = random_layer(2, 3, 2, rng);
  CHECK(rel_diff(upconv2(x, l), testing::naive_upconv(x, l)) < 1e-6);

  CHECK_THROWS_AS(upconv2(x, ConvLayer(2, 3, 3, 3)), ContractError);
  CHECK_THROWS_AS(upconv2(x, ConvLayer(2, 4, 2, 2)), ContractError);
}

TEST_CASE("relu and concat") {
  Tensor a(1, 1, 3);
  a.data = {-1.0f, 0.0f, 2.0f};
  relu_inplace(a);
  CHECK(a.data == std::vector<float>{0.0f, 0.0f, 2.0f});
  Tensor b(2, 1, 3, 7.0f);
  const Tensor c = concat_channels(a, b);
  CHECK(c.channels == 3);
  CHECK(c.at(0, 0, 2) == 2.0f);
  CHECK(c.at(2, 0, 0) == 7.0f);
  CHECK_THROWS_AS(concat_channels(a, Tensor(1, 2, 3)), ContractError);
}
