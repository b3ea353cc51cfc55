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

#include "permflow/fixedpoint.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "permflow/error.hpp"
#include "permflow/graycode.hpp"
#include "permflow/multiprecision.hpp"
#include "plan.hpp"

namespace permflow {

namespace {

__extension__ typedef __int128 Int128;

void set_int128(mpz_class& out, Int128 v) {
  const bool negative = v < 0;
  const GrayIndex mag = negative ? static_cast<GrayIndex>(-(v + 1)) + 1 : static_cast<GrayIndex>(v);
  out = static_cast<unsigned long>(mag >> 64);
  out <<= 64;
  out += static_cast<unsigned long>(mag & ~std::uint64_t{0});
  if (negative) out = -out;
}

bool fits(const mpz_class& raw, unsigned width) { return mpz_sizeinbase(raw.get_mpz_t(), 2) < width || raw == 0; }

// raw * 2^-shift rounded toward minus infinity, or an exact left shift.
void rescale(mpz_class& raw, long shift) {
  if (shift > 0) {
    mpz_fdiv_q_2exp(raw.get_mpz_t(), raw.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  } else if (shift < 0) {
    mpz_mul_2exp(raw.get_mpz_t(), raw.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
  }
}

[[noreturn]] void overflow(const std::string& where, unsigned width) {
  throw Error(ErrorCode::kOverflow, where + " exceeds " + std::to_string(width) +
                                        "-bit range; column normalization is required");
}

struct Multiplier {
  mpz_class ac, bd, k, s1, s2;

  void operator()(FixedPointComplex& out, const FixedPointComplex& x, const FixedPointComplex& y,
                  unsigned out_width) {
    ac = x.re * y.re;
    bd = x.im * y.im;
    s1 = x.re + x.im;
    s2 = y.re + y.im;
    k = s1 * s2;
    out.re = ac - bd;
    out.im = k - ac - bd;
    const unsigned out_fraction = out_width - 2;
    const long shift = static_cast<long>(x.fraction_bits + y.fraction_bits) - static_cast<long>(out_fraction);
    rescale(out.re, shift);
    rescale(out.im, shift);
    out.width = out_width;
    out.fraction_bits = out_fraction;
    if (!fits(out.re, out_width) || !fits(out.im, out_width)) overflow("complex product", out_width);
  }
};

void promote(FixedPointComplex& z, unsigned out_width) {
  const long shift = static_cast<long>(z.fraction_bits) - static_cast<long>(out_width - 2);
  rescale(z.re, shift);
  rescale(z.im, shift);
  z.width = out_width;
  z.fraction_bits = out_width - 2;
  if (!fits(z.re, out_width) || !fits(z.im, out_width)) overflow("tree passthrough", out_width);
}

// Reduces buf[0, count) in place; buf[0] holds the result.
void reduce_tree(std::vector<FixedPointComplex>& buf, std::size_t count, const FixedPointConfig& config,
                 Multiplier& mul) {
  for (unsigned width : config.tree_widths) {
    std::size_t next = 0;
    for (std::size_t i = 0; i + 1 < count; i += 2) mul(buf[next++], buf[i], buf[i + 1], width);
    if (count % 2 == 1) {
      // An odd element meets an exact one: a lossless widening.
      if (next != count - 1) std::swap(buf[next], buf[count - 1]);
      promote(buf[next++], width);
    }
    count = next;
  }
}

}  // namespace

void FixedPointConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kRange, "fixed-point config: " + what); };
  if (input_bits < 3) fail("input_bits must be at least 3");
  if (input_fraction_bits + 2 > input_bits) fail("input_fraction_bits must leave two integer bits");
  if (input_bits > 126) fail("input_bits must be at most 126");
  if (tree_widths.empty()) fail("tree_widths must not be empty");
  if (tree_widths.size() > 16) fail("at most 16 tree levels");
  for (unsigned w : tree_widths)
    if (w < 3) fail("tree widths must be at least 3");
  for (std::size_t l = 3; l < tree_widths.size(); ++l)
    if (tree_widths[l] < tree_widths[l - 1]) fail("tree widths must not decrease from level 3 onward");
  if (accumulator_integer_bits < 2 || accumulator_integer_bits >= accumulator_bits) {
    fail("accumulator_integer_bits must lie in [2, accumulator_bits)");
  }
}

bool FixedPointComplex::in_range() const { return fits(re, width) && fits(im, width); }

std::complex<long double> FixedPointComplex::to_std() const {
  const mpfr_prec_t bits = static_cast<mpfr_prec_t>(width) + 8;
  MpReal r(bits), i(bits);
  mpfr_set_z_2exp(r.get(), re.get_mpz_t(), -static_cast<long>(fraction_bits), MPFR_RNDN);
  mpfr_set_z_2exp(i.get(), im.get_mpz_t(), -static_cast<long>(fraction_bits), MPFR_RNDN);
  return {mpfr_get_ld(r.get(), MPFR_RNDN), mpfr_get_ld(i.get(), MPFR_RNDN)};
}

mpz_class to_fixed(double f, const FixedPointConfig& config) {
  if (!(std::abs(f) <= 1.0)) {
    throw Error(ErrorCode::kRange, "fixed-point input " + std::to_string(f) + " outside [-1, 1]");
  }
  // Scaling by a power of two is exact; nearbyint rounds half to even.
  const double scaled = std::nearbyint(std::ldexp(f, static_cast<int>(config.input_fraction_bits)));
  mpz_class out;
  mpz_set_d(out.get_mpz_t(), scaled);
  return out;
}

FixedPointComplex to_fixed(Complex z, const FixedPointConfig& config) {
  FixedPointComplex out;
  out.re = to_fixed(z.real(), config);
  out.im = to_fixed(z.imag(), config);
  out.width = config.input_bits;
  out.fraction_bits = config.input_fraction_bits;
  return out;
}

FixedPointComplex fixed_complex_mul(const FixedPointComplex& x, const FixedPointComplex& y, unsigned out_width) {
  if (out_width < 3) throw Error(ErrorCode::kRange, "output width must be at least 3");
  Multiplier mul;
  FixedPointComplex out;
  mul(out, x, y, out_width);
  return out;
}

FixedPointComplex product_tree(std::span<const FixedPointComplex> leaves, const FixedPointConfig& config) {
  config.validate();
  if (leaves.empty()) throw Error(ErrorCode::kRange, "product tree needs at least one leaf");
  if (leaves.size() > config.tree_capacity()) {
    throw Error(ErrorCode::kRange, "product tree holds at most " + std::to_string(config.tree_capacity()) +
                                       " leaves, got " + std::to_string(leaves.size()));
  }
  std::vector<FixedPointComplex> buf(leaves.begin(), leaves.end());
  Multiplier mul;
  reduce_tree(buf, buf.size(), config, mul);
  return buf[0];
}

namespace {

struct Cursor {
  NaryGrayState counter;
  GrayIndex next;
  GrayIndex end;
  std::vector<Int128> re;
  std::vector<Int128> im;
  std::uint64_t weight = 1;
};

class FixedKernel {
 public:
  // Entries are ingested as round(a_ij / alpha_j * 2^f), with the quotient
  // formed in extended precision so the double-rounded scaled matrix never
  // appears.
  FixedKernel(const ComplexMatrix& a, std::span<const double> alphas, const detail::RepeatedPlan& plan,
              const FixedPointConfig& config)
      : plan_(plan), config_(config), cols_(plan.cols) {
    const std::size_t digit_count = plan.digit_limits.size();
    auto raw = [&](double v, std::size_t j) {
      const long double f = static_cast<long double>(v) / alphas[j];
      // Rounding in alpha may push a bounded entry a few ulps past one; the
      // two integer bits hold it.
      if (!(std::abs(f) <= 1.0L + 0x1p-40L)) {
        throw Error(ErrorCode::kRange, "fixed-point input " + std::to_string(static_cast<double>(f)) +
                                           " outside [-1, 1]");
      }
      return static_cast<Int128>(
          std::llrint(std::ldexp(f, static_cast<int>(config.input_fraction_bits))));
    };
    for (std::size_t j = 0; j < cols_; ++j) {
      base_re_.push_back(raw(a(plan.fixed_row, j).real(), j));
      base_im_.push_back(raw(a(plan.fixed_row, j).imag(), j));
    }
    for (std::size_t k = 0; k < digit_count; ++k)
      for (std::size_t j = 0; j < cols_; ++j) {
        row_re_.push_back(raw(a(plan.digit_rows[k], j).real(), j));
        row_im_.push_back(raw(a(plan.digit_rows[k], j).imag(), j));
      }
    limit_ = Int128{1} << (config.input_bits - 1);
    leaves_.resize(plan.photons);
    // The 2^-(photons-1) prefactor is folded into the shift, so partial sums
    // stay within [-1, 1] for any normalized input. Unscaled sums reach
    // 2^(photons-1) on the identity.
    shift_ = static_cast<long>(config.tree_widths.back() - 2) - static_cast<long>(config.accumulator_fraction_bits()) +
             static_cast<long>(plan.photons - 1);
  }

  Cursor start(IndexRange range) const {
    Cursor c{NaryGrayState(plan_.digit_limits, range.begin), range.begin, range.end, base_re_, base_im_, 1};
    const auto digits = c.counter.digits();
    for (std::size_t k = 0; k < plan_.digit_limits.size(); ++k) {
      const Int128 mult = static_cast<Int128>(plan_.digit_limits[k]) - 2 * static_cast<Int128>(digits[k]);
      for (std::size_t j = 0; j < cols_; ++j) {
        c.re[j] += mult * row_re_[k * cols_ + j];
        c.im[j] += mult * row_im_[k * cols_ + j];
      }
      c.weight *= detail::binomial(plan_.digit_limits[k], digits[k]);
    }
    return c;
  }

  // Adds the cursor's current addend to the accumulator and advances it.
  void emit(Cursor& c) {
    std::size_t leaf = 0;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (c.re[j] >= limit_ || c.re[j] < -limit_ || c.im[j] >= limit_ || c.im[j] < -limit_) {
        overflow("column sum", config_.input_bits);
      }
      for (unsigned e = 0; e < plan_.col_mult[j]; ++e) {
        FixedPointComplex& z = leaves_[leaf++];
        set_int128(z.re, c.re[j]);
        set_int128(z.im, c.im[j]);
        z.width = config_.input_bits;
        z.fraction_bits = config_.input_fraction_bits;
      }
    }
    reduce_tree(leaves_, leaf, config_, mul_);
    FixedPointComplex& t = leaves_[0];
    if (c.weight != 1) {
      t.re *= c.weight;
      t.im *= c.weight;
    }
    if (c.counter.parity()) {
      t.re = -t.re;
      t.im = -t.im;
    }
    rescale(t.re, shift_);
    rescale(t.im, shift_);
    acc_re_ += t.re;
    acc_im_ += t.im;

    if (++c.next == c.end) return;
    const auto step = c.counter.step();
    const Int128* rre = &row_re_[step.digit * cols_];
    const Int128* rim = &row_im_[step.digit * cols_];
    const Int128 factor = step.change > 0 ? -2 : 2;
    for (std::size_t j = 0; j < cols_; ++j) {
      c.re[j] += factor * rre[j];
      c.im[j] += factor * rim[j];
    }
    const unsigned after = c.counter.digits()[step.digit];
    c.weight = binomial_update(c.weight, plan_.digit_limits[step.digit],
                               static_cast<unsigned>(static_cast<int>(after) - step.change), step.change);
  }

  void check_accumulator() const {
    const unsigned width = config_.accumulator_bits;
    if (!fits(acc_re_, width) || !fits(acc_im_, width)) overflow("accumulator", width);
  }

  const mpz_class& acc_re() const { return acc_re_; }
  const mpz_class& acc_im() const { return acc_im_; }

 private:
  const detail::RepeatedPlan& plan_;
  const FixedPointConfig& config_;
  std::size_t cols_;
  std::vector<Int128> base_re_, base_im_, row_re_, row_im_;
  Int128 limit_ = 0;
  std::vector<FixedPointComplex> leaves_;
  long shift_ = 0;
  Multiplier mul_;
  mpz_class acc_re_, acc_im_;
};

}  // namespace

FixedPointResult perm_fixed_detailed(const ComplexMatrix& a, const OccupationVector& row_mult,
                                     const OccupationVector& col_mult, const FixedPointConfig& config,
                                     const FixedPointOptions& options) {
  config.validate();
  if (options.streams != 1 && options.streams != 4) throw Error(ErrorCode::kRange, "streams must be 1 or 4");
  if (options.stagger == 0) throw Error(ErrorCode::kRange, "stagger must be at least 1");
  if (config.input_bits > 64) throw Error(ErrorCode::kRange, "fixed-point engine supports input_bits <= 64");

  detail::RepeatedPlan plan = detail::make_repeated_plan(a.rows(), a.cols(), row_mult, col_mult, true);
  if (plan.photons > kFixedPointMaxPhotons) {
    throw Error(ErrorCode::kSizeGuard, "fixed-point engine limited to n <= " + std::to_string(kFixedPointMaxPhotons));
  }
  if (plan.photons > config.tree_capacity()) {
    throw Error(ErrorCode::kSizeGuard, "product tree too small for " + std::to_string(plan.photons) + " photons");
  }
  if (plan.addends > kMaxAddends) throw Error(ErrorCode::kSizeGuard, "fixed-point engine limited to 2^30 addends");

  unsigned streams = 1;
  if (options.streams == 4) {
    detail::RepeatedPlan split = detail::make_repeated_plan(a.rows(), a.cols(), row_mult, col_mult, true, 2);
    const std::size_t d = split.digit_limits.size();
    if (d >= 2 && split.digit_limits[d - 1] == 1 && split.digit_limits[d - 2] == 1 && split.addends >= 4) {
      plan = std::move(split);
      streams = 4;
    }
  }

  FixedPointResult out;
  if (options.normalize) {
    out.scaling = scale_columns(a, row_mult, col_mult).scaling;
  } else {
    out.scaling.alphas.assign(a.cols(), 1.0);
    out.scaling.exponents.assign(col_mult.counts().begin(), col_mult.counts().end());
  }

  FixedKernel kernel(a, out.scaling.alphas, plan, config);
  // Streams own equal quarters of the index space, i.e. one setting of the
  // two leading binary digits each; every stream is cut into `stagger`
  // interleaved counters.
  std::vector<Cursor> cursors;
  for (const IndexRange& quarter : partition(plan.addends, streams)) {
    const GrayIndex pieces = std::min<GrayIndex>(options.stagger, quarter.size());
    for (const IndexRange& piece : partition(quarter.size(), static_cast<std::size_t>(pieces))) {
      cursors.push_back(kernel.start({quarter.begin + piece.begin, quarter.begin + piece.end}));
    }
  }
  for (bool active = true; active;) {
    active = false;
    for (Cursor& c : cursors) {
      if (c.next == c.end) continue;
      kernel.emit(c);
      active = true;
    }
    kernel.check_accumulator();
  }

  const mpfr_prec_t bits = static_cast<mpfr_prec_t>(config.accumulator_bits) + 64;
  MpComplex value(bits);
  const long exponent = -static_cast<long>(config.accumulator_fraction_bits());
  mpfr_set_z_2exp(value.re.get(), kernel.acc_re().get_mpz_t(), exponent, MPFR_RNDN);
  mpfr_set_z_2exp(value.im.get(), kernel.acc_im().get_mpz_t(), exponent, MPFR_RNDN);
  MpReal factor(bits), alpha(bits);
  mpfr_set_ui(factor.get(), 1, MPFR_RNDN);
  for (std::size_t j = 0; j < out.scaling.alphas.size(); ++j) {
    mpfr_set_d(alpha.get(), out.scaling.alphas[j], MPFR_RNDN);
    mpfr_pow_ui(alpha.get(), alpha.get(), out.scaling.exponents[j], MPFR_RNDN);
    mpfr_mul(factor.get(), factor.get(), alpha.get(), MPFR_RNDN);
  }
  mpfr_mul(value.re.get(), value.re.get(), factor.get(), MPFR_RNDN);
  mpfr_mul(value.im.get(), value.im.get(), factor.get(), MPFR_RNDN);

  out.result.value = value.to_std();
  out.result.engine = Engine::kFixedPoint;
  out.result.precision = Precision::kFixedPoint;
  out.result.precision_bits = config.accumulator_bits;
  out.result.addend_count = static_cast<std::uint64_t>(plan.addends);
  out.accumulator = kernel.acc_re();
  out.streams = streams;
  return out;
}

PermanentResult perm_fixed(const ComplexMatrix& a, const OccupationVector& row_mult,
                           const OccupationVector& col_mult, const FixedPointConfig& config,
                           const FixedPointOptions& options) {
  return perm_fixed_detailed(a, row_mult, col_mult, config, options).result;
}

PermanentResult perm_fixed(const ComplexMatrix& a, const FixedPointConfig& config, const FixedPointOptions& options) {
  return perm_fixed(a, OccupationVector::ones(a.rows()), OccupationVector::ones(a.cols()), config, options);
}

double worst_case_partial_sum_bound(unsigned n) {
  if (n < 1 || n > 64) throw Error(ErrorCode::kRange, "worst-case bound defined for 1 <= n <= 64");
  mpz_class odd_terms = 0, even_terms = 0, term, coeff;
  const long nn = static_cast<long>(n);
  for (unsigned k = 0; 2 * k <= n - 1; ++k) {
    const long odd_base = 2 * (2 * static_cast<long>(k) + 2) - nn;
    const long even_base = 2 * (2 * static_cast<long>(k) + 1) - nn;
    if (2 * k + 1 <= n - 1) {
      mpz_bin_uiui(coeff.get_mpz_t(), n - 1, 2 * k + 1);
      mpz_class base = odd_base;
      mpz_pow_ui(term.get_mpz_t(), base.get_mpz_t(), n);
      odd_terms += term * coeff;
    }
    mpz_bin_uiui(coeff.get_mpz_t(), n - 1, 2 * k);
    mpz_class base = even_base;
    mpz_pow_ui(term.get_mpz_t(), base.get_mpz_t(), n);
    even_terms += term * coeff;
  }
  mpz_class denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), n, n);
  mpq_class bound(std::max(odd_terms, even_terms), denom);
  bound.canonicalize();
  return bound.get_d();
}

}  // namespace permflow
