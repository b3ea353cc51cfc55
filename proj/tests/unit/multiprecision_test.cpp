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

#include "permflow/multiprecision.hpp"

#include <gtest/gtest.h>

#include "permflow/error.hpp"
#include "test_support.hpp"

namespace permflow {
namespace {

using testing::random_matrix;

TEST(Multiprecision, IdentityIsExactlyOne) {
  const auto unit = OccupationVector::ones(5);
  const MpComplex v = perm_multiprecision_value(ComplexMatrix::identity(5), unit, unit, 256);
  EXPECT_EQ(mpfr_cmp_ui(v.re.get(), 1), 0);
  EXPECT_TRUE(mpfr_zero_p(v.im.get()));
  const PermanentResult r = perm_multiprecision(ComplexMatrix::identity(5), 256);
  EXPECT_EQ(r.value, std::complex<long double>(1.0L));
  EXPECT_EQ(r.precision, Precision::kMultiprecision);
  EXPECT_EQ(r.precision_bits, 256u);
  EXPECT_EQ(r.addend_count, 16u);
}

TEST(Multiprecision, RectangularZeroTest) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t c = 1 + seed % 4;
    const std::size_t r = c + 2 + seed % 3;
    const ComplexMatrix a = random_matrix(r, c, seed);
    const MpComplex v =
        perm_multiprecision_value(a, OccupationVector::ones(r), OccupationVector::ones(c), kExactBits, true);
    EXPECT_TRUE(v.is_zero()) << r << "x" << c << " gave " << v.to_string();
  }
  // The unbalanced shape needs the explicit opt-in.
  const ComplexMatrix tall = random_matrix(4, 2, 1);
  EXPECT_THROW(perm_multiprecision_value(tall, OccupationVector::ones(4), OccupationVector::ones(2), kExactBits), Error);
}

TEST(Multiprecision, SelfConsistencyAcrossPrecisions) {
  const ComplexMatrix a = haar_random_unitary(8, 13);
  const auto unit = OccupationVector::ones(8);
  const MpComplex lo = perm_multiprecision_value(a, unit, unit, 256);
  const MpComplex hi = perm_multiprecision_value(a, unit, unit, 512);
  EXPECT_GE(agreement_bits(lo, hi), 200.0);
  EXPECT_EQ(relative_error(hi, hi), 0.0);
}

TEST(Multiprecision, AgreesWithFloatingEngines) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 2 + seed;
    const ComplexMatrix u = haar_random_unitary(n, seed);
    const MpComplex ref = perm_multiprecision_value(u, OccupationVector::ones(n), OccupationVector::ones(n), 256);
    EXPECT_LT(relative_error(perm_bbfg(u).value, ref), 1e-13);
    EXPECT_LT(relative_error(perm_naive(u).value, ref), 1e-12);
  }
}

TEST(Multiprecision, Multiplicities) {
  const ComplexMatrix a = random_matrix(3, 3, 2);
  const OccupationVector m{1, 2, 2}, n{2, 2, 1};
  const MpComplex v = perm_multiprecision_value(a, m, n, 256);
  EXPECT_LT(relative_error(perm_naive(expand_multiplicities(a, m, n)).value, v), 1e-13);
  EXPECT_EQ(perm_multiprecision(a, m, n, 128).addend_count, 9u);
}

TEST(Multiprecision, RejectsNarrowMantissa) {
  try {
    perm_multiprecision(ComplexMatrix::identity(2), 32);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRange);
  }
}

TEST(Multiprecision, RelativeErrorAgainstZeroReference) {
  MpComplex zero(128);
  EXPECT_THROW(relative_error(std::complex<long double>(1.0L), zero), Error);
}

TEST(Multiprecision, Formatting) {
  MpComplex v(128);
  mpfr_set_d(v.re.get(), 0.5, MPFR_RNDN);
  mpfr_set_d(v.im.get(), -2.0, MPFR_RNDN);
  EXPECT_EQ(v.to_string(5), "0.5-2i");
  EXPECT_EQ(v.to_std(), std::complex<long double>(0.5L, -2.0L));
}

}  // namespace
}  // namespace permflow
