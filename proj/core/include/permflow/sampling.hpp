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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "permflow/linalg.hpp"
#include "permflow/permanent.hpp"
#include "permflow/rng.hpp"

namespace permflow {

struct SampleRecord {
  OccupationVector output_state;
  OccupationVector input_state;
  std::uint64_t seed = 0;  // seed of this sample's generator stream
  Engine engine = Engine::kBbfgRepeated;
  double elapsed = 0.0;  // seconds
};

struct SamplerOptions {
  // Engine for the chain-rule weights: kBbfgRepeated, kBbfgGray, kRyser or kNaive.
  Engine engine = Engine::kBbfgRepeated;
  std::size_t workers = 1;
};

// |perm(U_ST)|^2 / prod_i s_i! t_i!
double output_probability(const ComplexMatrix& u, const OccupationVector& input, const OccupationVector& output);

inline constexpr std::uint64_t kBruteForceMaxOutcomes = 200000;

// Number of occupation vectors with `photons` photons over `modes` modes.
std::uint64_t outcome_count(std::size_t modes, unsigned photons);

// Every output state with its probability, in lexicographic order.
std::map<OccupationVector, double> brute_force_distribution(const ComplexMatrix& u, const OccupationVector& input);

// Draws one output state. The generator is consumed for the column
// permutation and one uniform per photon.
OccupationVector sample_one(const ComplexMatrix& u, const OccupationVector& input, Rng& rng,
                            Engine engine = Engine::kBbfgRepeated);

// Sample i draws from make_rng(seed, i), so results do not depend on workers.
std::vector<SampleRecord> sample_ideal(const ComplexMatrix& u, const OccupationVector& input, std::size_t count,
                                       std::uint64_t seed, const SamplerOptions& options = {});

// 2m x 2m unitary whose top-left block is the lossy transfer matrix.
ComplexMatrix dilate_lossy(const ComplexMatrix& u, double eta);
// Per-mode transmissions, applied at the output: T = diag(sqrt(eta)) U.
ComplexMatrix dilate_lossy(const ComplexMatrix& u, std::span<const double> etas);

enum class LossStrategy { kDilation, kThinning };

std::vector<SampleRecord> sample_lossy(const ComplexMatrix& u, const OccupationVector& input, double eta,
                                       std::size_t count, std::uint64_t seed,
                                       LossStrategy strategy = LossStrategy::kDilation,
                                       const SamplerOptions& options = {});
std::vector<SampleRecord> sample_lossy(const ComplexMatrix& u, const OccupationVector& input,
                                       std::span<const double> etas, std::size_t count, std::uint64_t seed,
                                       const SamplerOptions& options = {});

// Total variation distance between an empirical histogram and a distribution.
double total_variation(const std::map<OccupationVector, double>& exact, std::span<const SampleRecord> samples);
double total_variation(std::span<const SampleRecord> a, std::span<const SampleRecord> b);

struct BenchRecord {
  unsigned n = 0;
  unsigned m = 0;
  double loss = 1.0;  // transmission eta
  double seconds_per_sample = 0.0;
  std::uint64_t samples = 0;
};

// The bracketed complexity factor of the sampling-time model.
double sampling_time_factor(unsigned n, unsigned m);
double predicted_sampling_time(unsigned n, unsigned m, double t0);

struct FitResult {
  double t0 = 0.0;
  double residual = 0.0;  // relative RMS deviation of the fit
  std::vector<double> predicted;
};

// Least-squares single-parameter fit; lossy records use 2m modes.
FitResult fit_T0(std::span<const BenchRecord> records);

}  // namespace permflow
