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

#include "permflow/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "permflow/accumulate.hpp"
#include "permflow/error.hpp"
#include "permflow/graycode.hpp"
#include "plan.hpp"

namespace permflow {

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::kNaive: return "naive";
    case Engine::kRyser: return "ryser";
    case Engine::kRyserNW: return "ryser-nw";
    case Engine::kBbfgGray: return "bbfg-gray";
    case Engine::kBbfgDirect: return "bbfg";
    case Engine::kBbfgRepeated: return "bbfg-repeated";
    case Engine::kMultiprecision: return "multiprecision";
    case Engine::kFixedPoint: return "fixed";
  }
  return "unknown";
}

std::string_view to_string(Precision precision) {
  switch (precision) {
    case Precision::kDouble: return "double";
    case Precision::kExtended: return "extended";
    case Precision::kMultiprecision: return "multiprecision";
    case Precision::kFixedPoint: return "fixedpoint";
  }
  return "unknown";
}

std::string_view to_string(SplitMode mode) {
  return mode == SplitMode::kContiguous ? "contiguous" : "leading-digit";
}

namespace detail {

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t b = 1;
  for (unsigned i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

RepeatedPlan make_repeated_plan(std::size_t rows, std::size_t cols, const OccupationVector& row_mult,
                                const OccupationVector& col_mult, bool require_balanced,
                                unsigned binary_leading) {
  if (row_mult.modes() != rows || col_mult.modes() != cols) {
    throw Error(ErrorCode::kShape, "multiplicity vectors do not match the matrix shape");
  }
  if (rows == 0 || cols == 0) throw Error(ErrorCode::kShape, "empty matrix");
  for (unsigned m : row_mult.counts())
    if (m == 0) throw Error(ErrorCode::kRange, "row multiplicities must be >= 1");
  for (unsigned n : col_mult.counts())
    if (n == 0) throw Error(ErrorCode::kRange, "column multiplicities must be >= 1");
  if (require_balanced && row_mult.total() != col_mult.total()) {
    throw Error(ErrorCode::kMismatch, "sum of row multiplicities (" + std::to_string(row_mult.total()) +
                                          ") differs from sum of column multiplicities (" +
                                          std::to_string(col_mult.total()) + ")");
  }

  RepeatedPlan plan;
  plan.rows = rows;
  plan.cols = cols;
  plan.photons = row_mult.total();
  plan.col_mult.assign(col_mult.counts().begin(), col_mult.counts().end());

  std::vector<unsigned> remaining(row_mult.counts().begin(), row_mult.counts().end());
  const auto single = std::find(remaining.begin(), remaining.end(), 1u);
  plan.fixed_row = single != remaining.end() ? static_cast<std::size_t>(single - remaining.begin()) : 0;
  --remaining[plan.fixed_row];

  std::vector<std::size_t> leading;
  for (std::size_t k = 0; k < rows && leading.size() < binary_leading; ++k) {
    if (remaining[k] == 1) {
      leading.push_back(k);
      remaining[k] = 0;
    }
  }
  while (leading.size() < binary_leading) {
    std::size_t best = rows;
    for (std::size_t k = 0; k < rows; ++k)
      if (remaining[k] > 1 && (best == rows || remaining[k] < remaining[best])) best = k;
    if (best == rows) break;
    leading.push_back(best);
    --remaining[best];
  }

  for (std::size_t k = 0; k < rows; ++k) {
    if (remaining[k] == 0) continue;
    plan.digit_rows.push_back(k);
    plan.digit_limits.push_back(remaining[k]);
  }
  for (std::size_t k : leading) {
    plan.digit_rows.push_back(k);
    plan.digit_limits.push_back(1);
  }
  plan.addends = NaryGrayState::length(plan.digit_limits);
  return plan;
}

std::vector<IndexRange> make_grid(std::span<const unsigned> limits, const EngineOptions& options) {
  const GrayIndex total = NaryGrayState::length(limits);
  const std::size_t target = std::max<std::size_t>(1, options.chunks);
  if (options.split == SplitMode::kLeadingDigit) return partition_leading_digits(limits, target);
  const GrayIndex chunks = std::min<GrayIndex>(total, target);
  return partition(total, static_cast<std::size_t>(chunks));
}

}  // namespace detail

std::uint64_t repeated_addend_count(const OccupationVector& row_mult) {
  const detail::RepeatedPlan plan =
      detail::make_repeated_plan(row_mult.modes(), 1, row_mult, OccupationVector::ones(1), false);
  return static_cast<std::uint64_t>(plan.addends);
}

std::uint64_t binomial_update(std::uint64_t b, unsigned m, unsigned delta, int change) {
  // Also valid for any integer multiple of C(m, delta), which is how the
  // engines keep the product of all digit weights up to date.
  std::uint64_t num = 0, den = 0;
  if (change == 1) {
    if (delta >= m) throw Error(ErrorCode::kRange, "delta would exceed its limit");
    num = m - delta;
    den = delta + 1;
  } else if (change == -1) {
    if (delta == 0) throw Error(ErrorCode::kRange, "delta would become negative");
    num = delta;
    den = m - delta + 1;
  } else {
    throw Error(ErrorCode::kRange, "change must be +1 or -1");
  }
  const std::uint64_t scaled = b * num;
  if (scaled % den != 0) throw Error(ErrorCode::kInvariant, "inexact binomial update");
  return scaled / den;
}

namespace {

using detail::RepeatedPlan;

template <typename Real>
PermanentResult make_result(Cplx<Real> value, Engine engine, std::uint64_t addends) {
  PermanentResult r;
  r.value = value.to_std();
  r.engine = engine;
  r.precision = std::is_same_v<Real, double> ? Precision::kDouble : Precision::kExtended;
  r.precision_bits = std::numeric_limits<Real>::digits;
  r.addend_count = addends;
  return r;
}

template <typename Real>
std::vector<Cplx<Real>> to_cplx(const ComplexMatrix& a) {
  std::vector<Cplx<Real>> out;
  out.reserve(a.size());
  for (const Complex& z : a.data()) out.emplace_back(z);
  return out;
}

template <typename Real, class ChunkFn>
Cplx<Real> reduce_chunks(const std::vector<IndexRange>& grid, std::size_t workers, ChunkFn&& chunk_fn) {
  std::vector<Cplx<Real>> partials(grid.size());
  detail::run_chunks(grid.size(), workers, [&](std::size_t c) { partials[c] = chunk_fn(grid[c]); });
  Cplx<Real> total{};
  for (const auto& p : partials) total += p;
  return total;
}

// Sum over permutations of rows row..n-1 onto the columns cols[row..n),
// expanded along the first row. Partial sums stay per subtree, so rounding
// grows with the depth rather than with n!.
template <typename Real>
Cplx<Real> naive_recurse(const std::vector<Cplx<Real>>& a, std::size_t n, std::size_t row,
                         std::vector<std::size_t>& cols) {
  if (row + 2 == n) {
    const std::size_t p = cols[row], q = cols[row + 1];
    return a[row * n + p] * a[(row + 1) * n + q] + a[row * n + q] * a[(row + 1) * n + p];
  }
  if (row + 3 == n) {
    const Cplx<Real>* r0 = &a[row * n];
    const Cplx<Real>* r1 = r0 + n;
    const Cplx<Real>* r2 = r1 + n;
    const std::size_t p = cols[row], q = cols[row + 1], t = cols[row + 2];
    return r0[p] * (r1[q] * r2[t] + r1[t] * r2[q]) + r0[q] * (r1[p] * r2[t] + r1[t] * r2[p]) +
           r0[t] * (r1[p] * r2[q] + r1[q] * r2[p]);
  }
  Cplx<Real> total{};
  for (std::size_t k = row; k < n; ++k) {
    std::swap(cols[row], cols[k]);
    total += a[row * n + cols[row]] * naive_recurse(a, n, row + 1, cols);
    std::swap(cols[row], cols[k]);
  }
  return total;
}

template <typename Real>
PermanentResult naive_impl(const ComplexMatrix& a) {
  const auto m = to_cplx<Real>(a);
  Cplx<Real> total{};
  if (a.rows() == 1) {
    total = m[0];
  } else {
    std::vector<std::size_t> cols(a.rows());
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    total = naive_recurse<Real>(m, a.rows(), 0, cols);
  }
  std::uint64_t count = 1;
  for (std::size_t k = 2; k <= a.rows(); ++k) count *= k;
  return make_result(total, Engine::kNaive, count);
}

// Ryser over column subsets in binary Gray order. With `nw` set, subsets
// range over the first n-1 columns and every row sum starts at x_i.
template <typename Real>
PermanentResult ryser_impl(const ComplexMatrix& a, bool nw, const EngineOptions& options) {
  const std::size_t n = a.rows();
  const auto m = to_cplx<Real>(a);
  const std::size_t bits = nw ? n - 1 : n;
  std::vector<Cplx<Real>> start(n);
  if (nw) {
    for (std::size_t i = 0; i < n; ++i) {
      Cplx<Real> row_sum{};
      for (std::size_t j = 0; j < n; ++j) row_sum += m[i * n + j];
      start[i] = m[i * n + n - 1] - row_sum * Real(0.5);
    }
  }
  const std::vector<unsigned> limits(bits, 1);
  const auto grid = detail::make_grid(limits, options);

  auto chunk = [&](IndexRange range) {
    Accumulator<Real> acc(options.pockets);
    BinaryGrayState g = BinaryGrayState::at(range.begin);
    std::vector<Cplx<Real>> sums(start);
    for (std::size_t j = 0; j < bits; ++j) {
      if (((g.code >> j) & 1) == 0) continue;
      for (std::size_t i = 0; i < n; ++i) sums[i] += m[i * n + j];
    }
    for (GrayIndex idx = range.begin;;) {
      Cplx<Real> prod = sums[0];
      for (std::size_t i = 1; i < n; ++i) prod *= sums[i];
      acc.add(g.parity ? -prod : prod);
      if (++idx == range.end) break;
      const unsigned j = g.step();
      if ((g.code >> j) & 1) {
        for (std::size_t i = 0; i < n; ++i) sums[i] += m[i * n + j];
      } else {
        for (std::size_t i = 0; i < n; ++i) sums[i] -= m[i * n + j];
      }
    }
    return acc.value();
  };

  Cplx<Real> total = reduce_chunks<Real>(grid, options.workers, chunk);
  if (nw) {
    total *= Real(2);
    if ((n - 1) % 2 == 1) total = -total;
  } else if (n % 2 == 1) {
    total = -total;
  }
  return make_result(total, nw ? Engine::kRyserNW : Engine::kRyser,
                     static_cast<std::uint64_t>(NaryGrayState::length(limits)));
}

template <typename Real>
struct RepeatedData {
  const RepeatedPlan* plan = nullptr;
  std::vector<Cplx<Real>> base;   // fixed row
  std::vector<Cplx<Real>> rows;   // row behind digit k, [k * cols + j]
  std::vector<Cplx<Real>> twice;  // 2 * rows
};

template <typename Real>
RepeatedData<Real> prepare_repeated(const ComplexMatrix& a, const RepeatedPlan& plan) {
  RepeatedData<Real> d;
  d.plan = &plan;
  const std::size_t cols = plan.cols;
  for (std::size_t j = 0; j < cols; ++j) d.base.emplace_back(a(plan.fixed_row, j));
  for (std::size_t row : plan.digit_rows)
    for (std::size_t j = 0; j < cols; ++j) {
      const Cplx<Real> v(a(row, j));
      d.rows.push_back(v);
      d.twice.push_back(v * Real(2));
    }
  return d;
}

template <typename Real>
Cplx<Real> repeated_chunk(const RepeatedData<Real>& d, IndexRange range, bool pockets) {
  const RepeatedPlan& plan = *d.plan;
  const std::size_t cols = plan.cols;
  const std::size_t digit_count = plan.digit_limits.size();
  NaryGrayState counter(plan.digit_limits, range.begin);
  const auto digits = counter.digits();

  std::vector<Cplx<Real>> sums(d.base);
  std::uint64_t weight = 1;
  for (std::size_t k = 0; k < digit_count; ++k) {
    const Real mult = Real(static_cast<int>(plan.digit_limits[k]) - 2 * static_cast<int>(digits[k]));
    for (std::size_t j = 0; j < cols; ++j) sums[j] += d.rows[k * cols + j] * mult;
    weight *= detail::binomial(plan.digit_limits[k], digits[k]);
  }

  Accumulator<Real> acc(pockets);
  for (GrayIndex idx = range.begin;;) {
    Cplx<Real> prod = sums[0];
    for (unsigned e = 1; e < plan.col_mult[0]; ++e) prod *= sums[0];
    for (std::size_t j = 1; j < cols; ++j)
      for (unsigned e = 0; e < plan.col_mult[j]; ++e) prod *= sums[j];
    if (weight != 1) prod *= static_cast<Real>(weight);
    acc.add(counter.parity() ? -prod : prod);
    if (++idx == range.end) break;

    const auto step = counter.step();
    const Cplx<Real>* twice = &d.twice[step.digit * cols];
    // One more -1 among the copies lowers the column sum by twice the row.
    if (step.change > 0) {
      for (std::size_t j = 0; j < cols; ++j) sums[j] -= twice[j];
    } else {
      for (std::size_t j = 0; j < cols; ++j) sums[j] += twice[j];
    }
    const unsigned after = digits[step.digit];
    weight = binomial_update(weight, plan.digit_limits[step.digit],
                             static_cast<unsigned>(static_cast<int>(after) - step.change), step.change);
  }
  return acc.value();
}

template <typename Real>
Cplx<Real> repeated_value(const ComplexMatrix& a, const RepeatedPlan& plan, const EngineOptions& options) {
  const RepeatedData<Real> d = prepare_repeated<Real>(a, plan);
  const auto grid = detail::make_grid(plan.digit_limits, options);
  const Cplx<Real> total = reduce_chunks<Real>(
      grid, options.workers, [&](IndexRange range) { return repeated_chunk(d, range, options.pockets); });
  const Real scale = std::ldexp(Real(1), -static_cast<int>(plan.photons - 1));
  return total * scale;
}

template <typename Real>
PermanentResult direct_bbfg_impl(const ComplexMatrix& a, const EngineOptions& options) {
  const std::size_t r = a.rows(), c = a.cols();
  const auto m = to_cplx<Real>(a);
  const std::vector<unsigned> limits(r - 1, 1);
  const auto grid = detail::make_grid(limits, options);
  auto chunk = [&](IndexRange range) {
    Accumulator<Real> acc(options.pockets);
    std::vector<Cplx<Real>> sums(c);
    for (GrayIndex idx = range.begin; idx < range.end; ++idx) {
      const BinaryGrayState g = BinaryGrayState::at(idx);
      for (std::size_t j = 0; j < c; ++j) sums[j] = m[j];
      for (std::size_t i = 1; i < r; ++i) {
        const bool negative = ((g.code >> (i - 1)) & 1) != 0;
        for (std::size_t j = 0; j < c; ++j) {
          if (negative) {
            sums[j] -= m[i * c + j];
          } else {
            sums[j] += m[i * c + j];
          }
        }
      }
      Cplx<Real> prod = sums[0];
      for (std::size_t j = 1; j < c; ++j) prod *= sums[j];
      acc.add(g.parity ? -prod : prod);
    }
    return acc.value();
  };
  Cplx<Real> total = reduce_chunks<Real>(grid, options.workers, chunk);
  total *= std::ldexp(Real(1), -static_cast<int>(r - 1));
  return make_result(total, Engine::kBbfgDirect, static_cast<std::uint64_t>(NaryGrayState::length(limits)));
}

void require_square(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::kShape, "matrix must be square");
  if (a.rows() == 0) throw Error(ErrorCode::kShape, "empty matrix");
}

void require_float_precision(const EngineOptions& options) {
  if (options.precision != Precision::kDouble && options.precision != Precision::kExtended) {
    throw Error(ErrorCode::kRange, "floating-point engines support double and extended precision only");
  }
}

template <class Fn>
PermanentResult dispatch(const EngineOptions& options, Fn&& fn) {
  require_float_precision(options);
  if (options.precision == Precision::kExtended) return fn(static_cast<long double*>(nullptr));
  return fn(static_cast<double*>(nullptr));
}

}  // namespace

PermanentResult perm_naive(const ComplexMatrix& a, const EngineOptions& options) {
  require_square(a);
  if (a.rows() > kNaiveMaxSize) {
    throw Error(ErrorCode::kSizeGuard, "naive permanent limited to n <= " + std::to_string(kNaiveMaxSize));
  }
  return dispatch(options, [&](auto* tag) { return naive_impl<std::remove_pointer_t<decltype(tag)>>(a); });
}

PermanentResult perm_ryser(const ComplexMatrix& a, const EngineOptions& options) {
  require_square(a);
  if (a.rows() > kExponentialMaxSize) throw Error(ErrorCode::kSizeGuard, "Ryser limited to n <= 30");
  return dispatch(options,
                  [&](auto* tag) { return ryser_impl<std::remove_pointer_t<decltype(tag)>>(a, false, options); });
}

PermanentResult perm_ryser_nw(const ComplexMatrix& a, const EngineOptions& options) {
  require_square(a);
  if (a.rows() > kExponentialMaxSize) throw Error(ErrorCode::kSizeGuard, "Ryser limited to n <= 30");
  if (a.rows() == 1) {
    require_float_precision(options);
    PermanentResult r;
    r.value = a(0, 0);
    r.engine = Engine::kRyserNW;
    r.precision = options.precision;
    r.precision_bits = options.precision == Precision::kDouble ? 53 : std::numeric_limits<long double>::digits;
    r.addend_count = 1;
    return r;
  }
  return dispatch(options,
                  [&](auto* tag) { return ryser_impl<std::remove_pointer_t<decltype(tag)>>(a, true, options); });
}

PermanentResult perm_bbfg(const ComplexMatrix& a, bool gray, const EngineOptions& options) {
  if (a.rows() == 0 || a.cols() == 0) throw Error(ErrorCode::kShape, "empty matrix");
  if (a.rows() > a.cols() && !options.allow_more_rows) {
    throw Error(ErrorCode::kShape, "BB/FG needs rows <= columns (" + std::to_string(a.rows()) + " x " +
                                       std::to_string(a.cols()) + ")");
  }
  if (a.rows() > kExponentialMaxSize) throw Error(ErrorCode::kSizeGuard, "BB/FG limited to 30 rows");
  if (!gray) {
    return dispatch(options,
                    [&](auto* tag) { return direct_bbfg_impl<std::remove_pointer_t<decltype(tag)>>(a, options); });
  }
  const RepeatedPlan plan = detail::make_repeated_plan(a.rows(), a.cols(), OccupationVector::ones(a.rows()),
                                                       OccupationVector::ones(a.cols()), false);
  return dispatch(options, [&](auto* tag) {
    using Real = std::remove_pointer_t<decltype(tag)>;
    return make_result(repeated_value<Real>(a, plan, options), Engine::kBbfgGray,
                       static_cast<std::uint64_t>(plan.addends));
  });
}

ComplexMatrix pad_matrix(const ComplexMatrix& a, std::size_t target_cols) {
  require_square(a);
  if (target_cols < a.cols()) {
    throw Error(ErrorCode::kRange, "cannot pad " + std::to_string(a.cols()) + " columns down to " +
                                       std::to_string(target_cols));
  }
  ComplexMatrix out(a.rows(), target_cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t j = a.cols(); j < target_cols; ++j) out(0, j) = 1.0;
  return out;
}

PermanentResult perm_bbfg_repeated(const ComplexMatrix& a, const OccupationVector& row_mult,
                                   const OccupationVector& col_mult, const EngineOptions& options) {
  const RepeatedPlan plan = detail::make_repeated_plan(a.rows(), a.cols(), row_mult, col_mult, true);
  if (plan.addends > kMaxAddends) {
    throw Error(ErrorCode::kSizeGuard, "multiplicity engine limited to 2^30 addends, needs " + to_string(plan.addends));
  }
  return dispatch(options, [&](auto* tag) {
    using Real = std::remove_pointer_t<decltype(tag)>;
    return make_result(repeated_value<Real>(a, plan, options), Engine::kBbfgRepeated,
                       static_cast<std::uint64_t>(plan.addends));
  });
}

PermanentResult perm_parallel(const ComplexMatrix& a, const OccupationVector& row_mult,
                              const OccupationVector& col_mult, std::size_t workers, SplitMode mode,
                              EngineOptions options) {
  if (workers == 0) throw Error(ErrorCode::kRange, "at least one worker is required");
  options.workers = workers;
  options.split = mode;
  return perm_bbfg_repeated(a, row_mult, col_mult, options);
}

std::vector<PermanentResult> perm_batch(std::span<const ComplexMatrix> batch, const OccupationVector& row_mult,
                                        const OccupationVector& col_mult, const EngineOptions& options) {
  std::vector<PermanentResult> results;
  if (batch.empty()) return results;
  const std::size_t rows = batch.front().rows(), cols = batch.front().cols();
  for (const ComplexMatrix& m : batch) {
    if (m.rows() != rows || m.cols() != cols) {
      throw Error(ErrorCode::kBatchShape, "batched matrices must share one shape");
    }
  }
  // The counter plan and chunk grid are shared by the whole batch.
  const RepeatedPlan plan = detail::make_repeated_plan(rows, cols, row_mult, col_mult, true);
  if (plan.addends > kMaxAddends) throw Error(ErrorCode::kSizeGuard, "multiplicity engine limited to 2^30 addends");
  results.reserve(batch.size());
  for (const ComplexMatrix& m : batch) {
    results.push_back(dispatch(options, [&](auto* tag) {
      using Real = std::remove_pointer_t<decltype(tag)>;
      return make_result(repeated_value<Real>(m, plan, options), Engine::kBbfgRepeated,
                         static_cast<std::uint64_t>(plan.addends));
    }));
  }
  return results;
}

double relative_error(std::complex<long double> value, std::complex<long double> reference) {
  const long double denom = std::abs(reference);
  if (denom == 0.0L) throw Error(ErrorCode::kUndefined, "relative error against a zero reference");
  return static_cast<double>(std::abs(value - reference) / denom);
}

ErrorMeasure error_measure(std::complex<long double> value, std::complex<long double> reference) {
  if (std::abs(reference) == 0.0L) return {static_cast<double>(std::abs(value - reference)), true};
  return {relative_error(value, reference), false};
}

}  // namespace permflow
