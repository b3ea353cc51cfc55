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

#include <cstdint>
#include <random>

namespace permflow {

// Stream derivation: the generator for sub-stream k of a run seeded with s is
// std::mt19937_64 seeded with splitmix64(s ^ splitmix64(k + 1)). Sample i of a
// sampling run uses stream i; other subsystems use the tags below.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline constexpr std::uint64_t kStreamUnitary = 0x756e6974ULL;   // "unit"
inline constexpr std::uint64_t kStreamExperiment = 0x65787074ULL; // "expt"

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_seed(seed, stream)); }

// Uniform on [0, 1) with 53 random bits. Independent of the standard library's
// distribution implementations, so draws are reproducible across toolchains.
double uniform01(Rng& rng);
double standard_normal(Rng& rng);
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

}  // namespace permflow
