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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "permflow/error.hpp"
#include "permflow/graycode.hpp"
#include "plan.hpp"

namespace permflow {

MpReal::MpReal(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

MpReal::MpReal(const MpReal& other) {
  mpfr_init2(value_, other.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

MpReal& MpReal::operator=(const MpReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

MpReal::~MpReal() { mpfr_clear(value_); }

std::complex<long double> MpComplex::to_std() const {
  return {mpfr_get_ld(re.get(), MPFR_RNDN), mpfr_get_ld(im.get(), MPFR_RNDN)};
}

bool MpComplex::is_zero() const { return mpfr_zero_p(re.get()) && mpfr_zero_p(im.get()); }

namespace {

std::string render(mpfr_srcptr x, int digits) {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, x);
  return buf.data();
}

// |z| at the precision of `out`.
void magnitude(mpfr_ptr out, mpfr_srcptr re, mpfr_srcptr im) { mpfr_hypot(out, re, im, MPFR_RNDN); }

}  // namespace

std::string MpComplex::to_string(int digits) const {
  return render(re.get(), digits) + (mpfr_signbit(im.get()) ? "" : "+") + render(im.get(), digits) + "i";
}

double agreement_bits(const MpComplex& a, const MpComplex& b) {
  const mpfr_prec_t bits = std::min(a.re.bits(), b.re.bits());
  MpReal dre(bits + 16), dim(bits + 16), diff(bits + 16), ref(bits + 16);
  mpfr_sub(dre.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(dim.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  magnitude(diff.get(), dre.get(), dim.get());
  magnitude(ref.get(), b.re.get(), b.im.get());
  if (mpfr_zero_p(diff.get())) return static_cast<double>(bits);
  if (mpfr_zero_p(ref.get())) return 0.0;
  mpfr_div(diff.get(), diff.get(), ref.get(), MPFR_RNDN);
  mpfr_log2(diff.get(), diff.get(), MPFR_RNDN);
  return std::min(static_cast<double>(bits), -mpfr_get_d(diff.get(), MPFR_RNDN));
}

double relative_error(const MpComplex& value, const MpComplex& reference) {
  const mpfr_prec_t bits = std::max(value.re.bits(), reference.re.bits()) + 16;
  MpReal dre(bits), dim(bits), diff(bits), ref(bits);
  mpfr_sub(dre.get(), value.re.get(), reference.re.get(), MPFR_RNDN);
  mpfr_sub(dim.get(), value.im.get(), reference.im.get(), MPFR_RNDN);
  magnitude(diff.get(), dre.get(), dim.get());
  magnitude(ref.get(), reference.re.get(), reference.im.get());
  if (mpfr_zero_p(ref.get())) throw Error(ErrorCode::kUndefined, "relative error against a zero reference");
  mpfr_div(diff.get(), diff.get(), ref.get(), MPFR_RNDN);
  return mpfr_get_d(diff.get(), MPFR_RNDN);
}

double relative_error(std::complex<long double> value, const MpComplex& reference) {
  MpComplex v(std::numeric_limits<long double>::digits);
  mpfr_set_ld(v.re.get(), value.real(), MPFR_RNDN);
  mpfr_set_ld(v.im.get(), value.imag(), MPFR_RNDN);
  return relative_error(v, reference);
}

MpComplex perm_multiprecision_value(const ComplexMatrix& a, const OccupationVector& row_mult,
                                    const OccupationVector& col_mult, unsigned bits, bool allow_more_rows) {
  if (bits < kMinMantissaBits) {
    throw Error(ErrorCode::kRange, "multiprecision needs at least " + std::to_string(kMinMantissaBits) + " bits");
  }
  const detail::RepeatedPlan plan =
      detail::make_repeated_plan(a.rows(), a.cols(), row_mult, col_mult, !allow_more_rows);
  if (plan.addends > kMaxAddends) throw Error(ErrorCode::kSizeGuard, "multiprecision engine limited to 2^30 addends");
  const mpfr_prec_t prec = bits;
  const std::size_t cols = plan.cols;
  const std::size_t digit_count = plan.digit_limits.size();

  std::vector<MpReal> sum_re(cols, MpReal(prec)), sum_im(cols, MpReal(prec));
  std::vector<MpReal> twice_re, twice_im;
  twice_re.reserve(digit_count * cols);
  twice_im.reserve(digit_count * cols);
  for (std::size_t j = 0; j < cols; ++j) {
    mpfr_set_d(sum_re[j].get(), a(plan.fixed_row, j).real(), MPFR_RNDN);
    mpfr_set_d(sum_im[j].get(), a(plan.fixed_row, j).imag(), MPFR_RNDN);
  }
  MpReal term(prec);
  for (std::size_t k = 0; k < digit_count; ++k) {
    const long mult = static_cast<long>(plan.digit_limits[k]);
    for (std::size_t j = 0; j < cols; ++j) {
      const Complex v = a(plan.digit_rows[k], j);
      mpfr_set_d(term.get(), v.real(), MPFR_RNDN);
      mpfr_mul_si(term.get(), term.get(), mult, MPFR_RNDN);
      mpfr_add(sum_re[j].get(), sum_re[j].get(), term.get(), MPFR_RNDN);
      mpfr_set_d(term.get(), v.imag(), MPFR_RNDN);
      mpfr_mul_si(term.get(), term.get(), mult, MPFR_RNDN);
      mpfr_add(sum_im[j].get(), sum_im[j].get(), term.get(), MPFR_RNDN);
      twice_re.emplace_back(prec);
      twice_im.emplace_back(prec);
      mpfr_set_d(twice_re.back().get(), 2.0 * v.real(), MPFR_RNDN);
      mpfr_set_d(twice_im.back().get(), 2.0 * v.imag(), MPFR_RNDN);
    }
  }

  MpComplex acc(prec);
  MpReal pr(prec), pi(prec), tr(prec), ti(prec);
  NaryGrayState counter(plan.digit_limits, 0);
  const auto digits = counter.digits();
  std::uint64_t weight = 1;
  for (GrayIndex idx = 0;;) {
    bool first = true;
    for (std::size_t j = 0; j < cols; ++j) {
      for (unsigned e = 0; e < plan.col_mult[j]; ++e) {
        if (first) {
          mpfr_set(pr.get(), sum_re[j].get(), MPFR_RNDN);
          mpfr_set(pi.get(), sum_im[j].get(), MPFR_RNDN);
          first = false;
          continue;
        }
        mpfr_fmms(tr.get(), pr.get(), sum_re[j].get(), pi.get(), sum_im[j].get(), MPFR_RNDN);
        mpfr_fmma(ti.get(), pr.get(), sum_im[j].get(), pi.get(), sum_re[j].get(), MPFR_RNDN);
        mpfr_swap(pr.get(), tr.get());
        mpfr_swap(pi.get(), ti.get());
      }
    }
    if (weight != 1) {
      mpfr_mul_ui(pr.get(), pr.get(), weight, MPFR_RNDN);
      mpfr_mul_ui(pi.get(), pi.get(), weight, MPFR_RNDN);
    }
    if (counter.parity()) {
      mpfr_sub(acc.re.get(), acc.re.get(), pr.get(), MPFR_RNDN);
      mpfr_sub(acc.im.get(), acc.im.get(), pi.get(), MPFR_RNDN);
    } else {
      mpfr_add(acc.re.get(), acc.re.get(), pr.get(), MPFR_RNDN);
      mpfr_add(acc.im.get(), acc.im.get(), pi.get(), MPFR_RNDN);
    }
    if (++idx == plan.addends) break;

    const auto step = counter.step();
    const std::size_t base = step.digit * cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (step.change > 0) {
        mpfr_sub(sum_re[j].get(), sum_re[j].get(), twice_re[base + j].get(), MPFR_RNDN);
        mpfr_sub(sum_im[j].get(), sum_im[j].get(), twice_im[base + j].get(), MPFR_RNDN);
      } else {
        mpfr_add(sum_re[j].get(), sum_re[j].get(), twice_re[base + j].get(), MPFR_RNDN);
        mpfr_add(sum_im[j].get(), sum_im[j].get(), twice_im[base + j].get(), MPFR_RNDN);
      }
    }
    const unsigned after = digits[step.digit];
    weight = binomial_update(weight, plan.digit_limits[step.digit],
                             static_cast<unsigned>(static_cast<int>(after) - step.change), step.change);
  }
  mpfr_div_2ui(acc.re.get(), acc.re.get(), plan.photons - 1, MPFR_RNDN);
  mpfr_div_2ui(acc.im.get(), acc.im.get(), plan.photons - 1, MPFR_RNDN);
  return acc;
}

PermanentResult perm_multiprecision(const ComplexMatrix& a, const OccupationVector& row_mult,
                                    const OccupationVector& col_mult, unsigned bits) {
  const MpComplex value = perm_multiprecision_value(a, row_mult, col_mult, bits);
  const detail::RepeatedPlan plan = detail::make_repeated_plan(a.rows(), a.cols(), row_mult, col_mult, true);
  PermanentResult r;
  r.value = value.to_std();
  r.engine = Engine::kMultiprecision;
  r.precision = Precision::kMultiprecision;
  r.precision_bits = bits;
  r.addend_count = static_cast<std::uint64_t>(plan.addends);
  return r;
}

PermanentResult perm_multiprecision(const ComplexMatrix& a, unsigned bits) {
  return perm_multiprecision(a, OccupationVector::ones(a.rows()), OccupationVector::ones(a.cols()), bits);
}

}  // namespace permflow
