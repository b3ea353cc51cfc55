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

#include "permflow/multiprecision.hpp"
#include "permflow/permanent.hpp"

namespace {

using namespace permflow;

void BM_Ryser(benchmark::State& state) {
  const ComplexMatrix u = haar_random_unitary(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(perm_ryser(u).value);
}
BENCHMARK(BM_Ryser)->DenseRange(8, 20, 4);

void BM_RyserNw(benchmark::State& state) {
  const ComplexMatrix u = haar_random_unitary(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(perm_ryser_nw(u).value);
}
BENCHMARK(BM_RyserNw)->DenseRange(8, 20, 4);

void BM_BbfgGray(benchmark::State& state) {
  const ComplexMatrix u = haar_random_unitary(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(perm_bbfg(u, true).value);
}
BENCHMARK(BM_BbfgGray)->DenseRange(8, 24, 4);

void BM_BbfgGrayExtended(benchmark::State& state) {
  const ComplexMatrix u = haar_random_unitary(static_cast<std::size_t>(state.range(0)), 1);
  EngineOptions o;
  o.precision = Precision::kExtended;
  for (auto _ : state) benchmark::DoNotOptimize(perm_bbfg(u, true, o).value);
}
BENCHMARK(BM_BbfgGrayExtended)->DenseRange(8, 20, 4);

void BM_BbfgPockets(benchmark::State& state) {
  const ComplexMatrix u = haar_random_unitary(static_cast<std::size_t>(state.range(0)), 1);
  EngineOptions o;
  o.pockets = true;
  for (auto _ : state) benchmark::DoNotOptimize(perm_bbfg(u, true, o).value);
}
BENCHMARK(BM_BbfgPockets)->DenseRange(8, 20, 4);

void BM_BbfgDirect(benchmark::State& state) {
  const ComplexMatrix u = haar_random_unitary(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(perm_bbfg(u, false).value);
}
BENCHMARK(BM_BbfgDirect)->DenseRange(8, 16, 4);

// Two photons per row: (M+1)^k addends against 2^(2k) for the expanded matrix.
void BM_RepeatedRows(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix u = haar_random_unitary(k, 2);
  const OccupationVector twos(std::vector<unsigned>(k, 2));
  for (auto _ : state) benchmark::DoNotOptimize(perm_bbfg_repeated(u, twos, twos).value);
}
BENCHMARK(BM_RepeatedRows)->DenseRange(4, 10, 2);

void BM_RepeatedRowsExpanded(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const OccupationVector twos(std::vector<unsigned>(k, 2));
  const ComplexMatrix a = expand_multiplicities(haar_random_unitary(k, 2), twos, twos);
  for (auto _ : state) benchmark::DoNotOptimize(perm_bbfg(a).value);
}
BENCHMARK(BM_RepeatedRowsExpanded)->DenseRange(4, 10, 2);

void BM_Parallel(benchmark::State& state) {
  const ComplexMatrix u = haar_random_unitary(20, 3);
  const auto unit = OccupationVector::ones(20);
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(perm_parallel(u, unit, unit, workers, SplitMode::kContiguous).value);
}
BENCHMARK(BM_Parallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

void BM_Multiprecision(benchmark::State& state) {
  const ComplexMatrix u = haar_random_unitary(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(perm_multiprecision(u, kOracleBits).value);
}
BENCHMARK(BM_Multiprecision)->DenseRange(8, 14, 2);

}  // namespace

BENCHMARK_MAIN();
