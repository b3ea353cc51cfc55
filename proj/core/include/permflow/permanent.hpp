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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "permflow/linalg.hpp"

namespace permflow {

enum class Engine {
  kNaive,
  kRyser,
  kRyserNW,
  kBbfgGray,
  kBbfgDirect,  // BB/FG with every column sum recomputed per delta
  kBbfgRepeated,
  kMultiprecision,
  kFixedPoint,
};

enum class Precision { kDouble, kExtended, kMultiprecision, kFixedPoint };

// How the addend index space is cut into chunks.
enum class SplitMode { kContiguous, kLeadingDigit };

std::string_view to_string(Engine engine);
std::string_view to_string(Precision precision);
std::string_view to_string(SplitMode mode);

// Exponential engines evaluate the index space in a fixed grid of chunks.
// Each chunk starts its Gray counter and running sums from scratch and the
// chunk sums are reduced in ascending order, so the value depends on the grid
// but never on how many workers share it.
inline constexpr std::size_t kDefaultChunks = 64;

struct EngineOptions {
  Precision precision = Precision::kDouble;  // kDouble or kExtended
  std::size_t workers = 1;
  SplitMode split = SplitMode::kContiguous;
  std::size_t chunks = kDefaultChunks;
  bool pockets = false;
  // BB/FG only: accept more rows than columns. The result of such a matrix is
  // mathematically zero once rows >= cols + 2.
  bool allow_more_rows = false;
};

struct PermanentResult {
  std::complex<long double> value;
  Engine engine = Engine::kNaive;
  Precision precision = Precision::kDouble;
  unsigned precision_bits = 0;  // mantissa bits, or accumulator bits for fixed point
  std::uint64_t addend_count = 0;
};

inline constexpr std::size_t kNaiveMaxSize = 12;
inline constexpr std::size_t kExponentialMaxSize = 30;
inline constexpr std::uint64_t kMaxAddends = std::uint64_t{1} << 30;

PermanentResult perm_naive(const ComplexMatrix& a, const EngineOptions& options = {});
PermanentResult perm_ryser(const ComplexMatrix& a, const EngineOptions& options = {});
PermanentResult perm_ryser_nw(const ComplexMatrix& a, const EngineOptions& options = {});

// BB/FG over column sums for an r x c matrix with r <= c. With gray = false
// every column sum is recomputed for each delta vector.
PermanentResult perm_bbfg(const ComplexMatrix& a, bool gray = true, const EngineOptions& options = {});

// Embeds a square matrix into n x target_cols: the first row is padded with
// ones and the other rows with zeros. BB/FG of the result equals perm(a).
ComplexMatrix pad_matrix(const ComplexMatrix& a, std::size_t target_cols);

// BB/FG with row multiplicities M (via an n-ary Gray counter) and column
// multiplicities N (as powers of the column sums). Equals the permanent of
// expand_multiplicities(a, M, N).
PermanentResult perm_bbfg_repeated(const ComplexMatrix& a, const OccupationVector& row_mult,
                                   const OccupationVector& col_mult, const EngineOptions& options = {});

// prod_k (M_k' + 1) for row multiplicities M after the first-row convention.
std::uint64_t repeated_addend_count(const OccupationVector& row_mult);

// One step of the binomial recurrence: b = C(m, delta) becomes C(m, delta + change).
std::uint64_t binomial_update(std::uint64_t b, unsigned m, unsigned delta, int change);

PermanentResult perm_parallel(const ComplexMatrix& a, const OccupationVector& row_mult,
                              const OccupationVector& col_mult, std::size_t workers, SplitMode mode,
                              EngineOptions options = {});

// All matrices must share one shape; the multiplicities are shared too.
std::vector<PermanentResult> perm_batch(std::span<const ComplexMatrix> batch, const OccupationVector& row_mult,
                                        const OccupationVector& col_mult, const EngineOptions& options = {});

// |value - reference| / |reference|. Throws ErrorCode::kUndefined when the
// reference is zero.
double relative_error(std::complex<long double> value, std::complex<long double> reference);

struct ErrorMeasure {
  double value = 0.0;
  bool absolute = false;  // reference was zero; value is |value - reference|
};
ErrorMeasure error_measure(std::complex<long double> value, std::complex<long double> reference);

}  // namespace permflow
