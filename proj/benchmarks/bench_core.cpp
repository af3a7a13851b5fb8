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

#include <benchmark/benchmark.h>

#include "bimlab/bim.hpp"
#include "bimlab/dataset.hpp"
#include "bimlab/forward.hpp"
#include "bimlab/nn/unet.hpp"
#include "bimlab/special.hpp"

namespace {

using namespace bimlab;

void BM_Hankel2(benchmark::State& state) {
  const int order = int(state.range(0));
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(em::hankel2(order, x));
    x = x < 50.0 ? x * 1.07 : 0.5;
  }
}
BENCHMARK(BM_Hankel2)->Arg(0)->Arg(1);

ProblemConfig grid(int n) {
  ProblemConfig c;
  c.grid_nx = c.grid_ny = n;
  c.pixel_size_m = 4.8 / n;
  return c;
}

void BM_BuildGreens(benchmark::State& state) {
  const auto cfg = grid(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(em::build_greens(cfg));
}
BENCHMARK(BM_BuildGreens)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SolveState(benchmark::State& state) {
  const auto cfg = grid(int(state.range(0)));
  const auto model = em::ForwardModel::build(cfg);
  const auto t = data::rasterize(data::random_scene(data::SceneParams::from_config(cfg), 1), cfg);
  const auto mode = state.range(1) ? em::StateSolveMode::accurate() : em::StateSolveMode::fixed(cfg.n_bcg);
  for (auto _ : state) benchmark::DoNotOptimize(em::solve_state(model.ops, t, model.e_inc, mode));
}
BENCHMARK(BM_SolveState)->Args({16, 0})->Args({32, 0})->Args({32, 1})->Unit(benchmark::kMillisecond);

void BM_Sbim(benchmark::State& state) {
  const ProblemConfig cfg;
  const auto model = em::ForwardModel::build(cfg);
  const auto t = data::rasterize(data::random_scene(data::SceneParams::from_config(cfg), 2), cfg);
  const auto e = em::forward_solve(model, t);
  for (auto _ : state) benchmark::DoNotOptimize(inverse::sbim(model, e));
}
BENCHMARK(BM_Sbim)->Unit(benchmark::kMillisecond);

void BM_UNetForward(benchmark::State& state) {
  const auto w = nn::UNetWeights::random(1);
  const int n = int(state.range(0));
  nn::Tensor x(2, n, n, 0.25f);
  for (auto _ : state) benchmark::DoNotOptimize(nn::unet_forward(w, x));
}
BENCHMARK(BM_UNetForward)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
