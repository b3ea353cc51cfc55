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

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "permflow/linalg.hpp"
#include "permflow/permanent.hpp"

namespace permflow {

struct FixedPointConfig {
  unsigned input_bits = 64;
  unsigned input_fraction_bits = 62;
  std::vector<unsigned> tree_widths = {79, 79, 93, 110, 158, 189};
  unsigned accumulator_bits = 192;
  unsigned accumulator_integer_bits = 6;

  unsigned tree_levels() const noexcept { return static_cast<unsigned>(tree_widths.size()); }
  std::size_t tree_capacity() const noexcept { return std::size_t{1} << tree_widths.size(); }
  unsigned accumulator_fraction_bits() const noexcept { return accumulator_bits - accumulator_integer_bits; }

  // Throws ErrorCode::kRange on an inconsistent profile.
  void validate() const;
};

// Two's-complement complex value raw / 2^fraction_bits held in `width` bits.
struct FixedPointComplex {
  mpz_class re;
  mpz_class im;
  unsigned width = 64;
  unsigned fraction_bits = 62;

  bool in_range() const;
  std::complex<long double> to_std() const;
};

mpz_class to_fixed(double f, const FixedPointConfig& config);
FixedPointComplex to_fixed(Complex z, const FixedPointConfig& config);

// Ungar three-multiplication product, floored to out_width bits with two
// integer bits. Throws ErrorCode::kOverflow if the result does not fit.
FixedPointComplex fixed_complex_mul(const FixedPointComplex& x, const FixedPointComplex& y, unsigned out_width);

// Pairwise product over config.tree_levels() levels. Missing leaves are
// exact ones; the result is at the deepest width.
FixedPointComplex product_tree(std::span<const FixedPointComplex> leaves, const FixedPointConfig& config);

struct FixedPointOptions {
  bool normalize = true;  // apply scale_columns before ingestion
  unsigned streams = 1;   // 1, or 4 for multiplexing on the two leading binary digits
  unsigned stagger = 1;   // interleaved counters per stream
};

struct FixedPointResult {
  PermanentResult result;
  mpz_class accumulator;  // raw sum at config.accumulator_fraction_bits()
  unsigned streams = 1;   // stream count actually used
  ColumnScaling scaling;
};

inline constexpr std::size_t kFixedPointMaxPhotons = 28;

FixedPointResult perm_fixed_detailed(const ComplexMatrix& a, const OccupationVector& row_mult,
                                     const OccupationVector& col_mult, const FixedPointConfig& config = {},
                                     const FixedPointOptions& options = {});

PermanentResult perm_fixed(const ComplexMatrix& a, const OccupationVector& row_mult,
                           const OccupationVector& col_mult, const FixedPointConfig& config = {},
                           const FixedPointOptions& options = {});
PermanentResult perm_fixed(const ComplexMatrix& a, const FixedPointConfig& config = {},
                           const FixedPointOptions& options = {});

// Largest partial-sum magnitude of the normalized all-ones n x n matrix.
double worst_case_partial_sum_bound(unsigned n);

}  // namespace permflow
