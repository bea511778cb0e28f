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
#include "gslr/tnn.h"

namespace gslr {
namespace {

Tensor3 RandomTensor(std::size_t h, std::size_t w, std::size_t b) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u;
  Tensor3 t(h, w, b);
  for (double& v : t.data()) v = u(rng);
  return t;
}

void BM_DftMode3(benchmark::State& state) {
  const Tensor3 t = RandomTensor(64, 64, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(DftMode3(t));
}
BENCHMARK(BM_DftMode3)->Arg(16)->Arg(31);

void BM_TensorSvt(benchmark::State& state) {
  const std::size_t side = state.range(0), b = state.range(1);
  const Tensor3 t = RandomTensor(side, side, b);
  for (auto _ : state) benchmark::DoNotOptimize(TensorSvt(t, 0.5));
}
BENCHMARK(BM_TensorSvt)->Args({32, 8})->Args({64, 16});

}  // namespace
}  // namespace gslr
