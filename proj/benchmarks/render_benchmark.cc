/*
Copyright 2026 The GSLR Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <random>

#include "benchmark/benchmark.h"
#include "gslr/splat1d.h"
#include "gslr/splat2d.h"

namespace gslr {
namespace {

Gaussian2DField Field(std::size_t n, std::size_t r, std::size_t side) {
  std::mt19937_64 rng(1);
  return InitField2D(n, r, side, side, rng, 1.0);
}

void BM_Render2D(benchmark::State& state) {
  const std::size_t n = state.range(0), side = state.range(1);
  const Gaussian2DField f = Field(n, 8, side);
  for (auto _ : state) benchmark::DoNotOptimize(Render2D(f, side, side));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_Render2D)->Args({256, 64})->Args({1024, 64})->Args({4096, 128});

void BM_Render2DNaive(benchmark::State& state) {
  const std::size_t n = state.range(0), side = state.range(1);
  const Gaussian2DField f = Field(n, 8, side);
  for (auto _ : state) benchmark::DoNotOptimize(Render2D(f, side, side, NaiveRenderConfig()));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_Render2DNaive)->Args({256, 64})->Args({1024, 64});

void BM_Render2DBackward(benchmark::State& state) {
  const std::size_t n = state.range(0), side = state.range(1);
  const Gaussian2DField f = Field(n, 8, side);
  const Tensor3 upstream(side, side, 8, 1.0);
  const RenderConfig2D cfg;
  for (auto _ : state) benchmark::DoNotOptimize(Render2DBackward(f, side, side, cfg, upstream));
}
BENCHMARK(BM_Render2DBackward)->Args({256, 64})->Args({1024, 64});

void BM_Render1D(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const std::size_t b = state.range(0);
  const Gaussian1DBank bank = InitBank1D(30, 40, b, rng, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(Render1D(bank, b));
}
BENCHMARK(BM_Render1D)->Arg(31)->Arg(128);

}  // namespace
}  // namespace gslr
