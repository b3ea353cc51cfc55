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

#include <mpfr.h>

#include <complex>
#include <string>

#include "permflow/linalg.hpp"
#include "permflow/permanent.hpp"

namespace permflow {

class MpReal {
 public:
  explicit MpReal(mpfr_prec_t bits);
  MpReal(const MpReal& other);
  MpReal& operator=(const MpReal& other);
  ~MpReal();

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_prec_t bits() const noexcept { return mpfr_get_prec(value_); }

 private:
  mpfr_t value_;
};

struct MpComplex {
  MpReal re;
  MpReal im;

  explicit MpComplex(mpfr_prec_t bits) : re(bits), im(bits) {}

  std::complex<long double> to_std() const;
  bool is_zero() const;
  // Decimal rendering with `digits` significant digits per component.
  std::string to_string(int digits = 30) const;
};

// Number of leading bits on which a and b agree, -log2(|a - b| / |b|),
// capped at the smaller precision. Returns the cap when both are zero.
double agreement_bits(const MpComplex& a, const MpComplex& b);

// mpfr relative error |value - reference| / |reference| rounded to double.
double relative_error(std::complex<long double> value, const MpComplex& reference);
double relative_error(const MpComplex& value, const MpComplex& reference);

inline constexpr unsigned kMinMantissaBits = 64;
inline constexpr unsigned kOracleBits = 256;
// Enough bits for every addend and partial sum to be exact on desk-sized
// matrices of binary64 entries.
inline constexpr unsigned kExactBits = 4096;

// Multiplicity-aware BB/FG evaluated in MPFR with correctly rounded
// operations at `bits` of mantissa. With allow_more_rows the row and column
// totals need not match; for rows >= cols + 2 the exact value is zero.
MpComplex perm_multiprecision_value(const ComplexMatrix& a, const OccupationVector& row_mult,
                                    const OccupationVector& col_mult, unsigned bits, bool allow_more_rows = false);

PermanentResult perm_multiprecision(const ComplexMatrix& a, const OccupationVector& row_mult,
                                    const OccupationVector& col_mult, unsigned bits);
PermanentResult perm_multiprecision(const ComplexMatrix& a, unsigned bits);

}  // namespace permflow
