// Copyright 2026 The permflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "permflow/fixedpoint.hpp"

namespace {

using namespace permflow;

void BM_FixedPoint(benchmark::State& state) {
  const ComplexMatrix u = haar_random_unitary(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(perm_fixed(u).value);
}
BENCHMARK(BM_FixedPoint)->DenseRange(6, 14, 4);

void BM_FixedPointStreams(benchmark::State& state) {
  const ComplexMatrix u = haar_random_unitary(12, 1);
  FixedPointOptions o;
  o.streams = 4;
  o.stagger = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(perm_fixed(u, {}, o).value);
}
BENCHMARK(BM_FixedPointStreams)->Arg(1)->Arg(4);

void BM_ProductTree(benchmark::State& state) {
  const FixedPointConfig config;
  const std::vector<FixedPointComplex> leaves(static_cast<std::size_t>(state.range(0)),
                                              to_fixed(Complex(0.6, -0.7), config));
  for (auto _ : state) benchmark::DoNotOptimize(product_tree(leaves, config));
}
BENCHMARK(BM_ProductTree)->Arg(8)->Arg(20)->Arg(40)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
