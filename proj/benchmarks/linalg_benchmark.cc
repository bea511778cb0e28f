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
#include "gslr/linalg.h"

namespace gslr {
namespace {

Matrix RandomMatrix(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  Matrix m(rows, cols);
  for (double& v : m.data()) v = n(rng);
  return m;
}

void BM_ThinSvd(benchmark::State& state) {
  const Matrix m = RandomMatrix(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(ThinSvd(m));
}
BENCHMARK(BM_ThinSvd)->Args({16, 16})->Args({64, 64})->Args({128, 64})->Args({128, 128});

void BM_NuclearNormWithSubgrad(benchmark::State& state) {
  const Matrix m = RandomMatrix(state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(NuclearNormWithSubgrad(m));
}
BENCHMARK(BM_NuclearNormWithSubgrad)->Arg(32)->Arg(64);

}  // namespace
}  // namespace gslr
