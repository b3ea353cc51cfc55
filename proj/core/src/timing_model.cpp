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

#include <gmpxx.h>

#include <cmath>

#include "permflow/error.hpp"
#include "permflow/sampling.hpp"

namespace permflow {

double sampling_time_factor(unsigned n, unsigned m) {
  if (n < 1 || m < 1) throw Error(ErrorCode::kRange, "timing model needs n, m >= 1");
  mpz_class upper, lower;
  mpz_bin_uiui(upper.get_mpz_t(), 2 * m + n, n + 1);
  mpz_bin_uiui(lower.get_mpz_t(), m + n, n + 1);
  mpq_class factor(mpz_class(n) * (m + n) * upper, mpz_class(m) * lower);
  factor.canonicalize();
  factor += mpz_class(n) * n * m;
  return factor.get_d();
}

double predicted_sampling_time(unsigned n, unsigned m, double t0) { return t0 * sampling_time_factor(n, m); }

FitResult fit_T0(std::span<const BenchRecord> records) {
  if (records.empty()) throw Error(ErrorCode::kEmptyState, "no benchmark records to fit");
  std::vector<double> factors;
  long double num = 0.0L, den = 0.0L;
  for (const BenchRecord& r : records) {
    if (!(r.seconds_per_sample > 0.0)) throw Error(ErrorCode::kRange, "seconds_per_sample must be positive");
    const double f = sampling_time_factor(r.n, r.loss < 1.0 ? 2 * r.m : r.m);
    factors.push_back(f);
    num += static_cast<long double>(r.seconds_per_sample) * f;
    den += static_cast<long double>(f) * f;
  }
  FitResult fit;
  // One record solves t = T0 f directly, without the extra rounding of f^2.
  fit.t0 = records.size() == 1 ? records[0].seconds_per_sample / factors[0] : static_cast<double>(num / den);
  long double sq = 0.0L;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double predicted = fit.t0 * factors[i];
    fit.predicted.push_back(predicted);
    const long double rel = (predicted - records[i].seconds_per_sample) / records[i].seconds_per_sample;
    sq += rel * rel;
  }
  fit.residual = static_cast<double>(std::sqrt(sq / records.size()));
  return fit;
}

}  // namespace permflow
