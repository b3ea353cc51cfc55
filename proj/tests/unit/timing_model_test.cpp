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

#include <gtest/gtest.h>

#include <cmath>

#include "permflow/error.hpp"
#include "permflow/rng.hpp"
#include "permflow/sampling.hpp"

namespace permflow {
namespace {

TEST(TimingModel, HandEvaluatedFactor) {
  EXPECT_DOUBLE_EQ(sampling_time_factor(1, 1), 7.0);
  EXPECT_DOUBLE_EQ(predicted_sampling_time(1, 1, 2.0), 14.0);
  EXPECT_EQ(predicted_sampling_time(1, 1, 0.0), 0.0);
  EXPECT_EQ(predicted_sampling_time(20, 60, 0.0), 0.0);
}

TEST(TimingModel, ExactBinomials) {
  // (20 * 80 / 60) * C(140, 21) / C(80, 21) + 20^2 * 60, from exact integers.
  long double ratio = 1.0L;
  for (int k = 0; k < 21; ++k) ratio *= static_cast<long double>(140 - k) / static_cast<long double>(80 - k);
  const long double expected = (20.0L * 80.0L / 60.0L) * ratio + 400.0L * 60.0L;
  const double factor = sampling_time_factor(20, 60);
  EXPECT_NEAR(factor, static_cast<double>(expected), 1e-12 * factor);
  EXPECT_NEAR(predicted_sampling_time(20, 60, 7.5e-11), 7.5e-11 * factor, 1e-15 * 7.5e-11 * factor);
  EXPECT_THROW(sampling_time_factor(0, 3), Error);
}

std::vector<BenchRecord> synthetic(double t0, double noise, std::uint64_t seed) {
  Rng rng = make_rng(seed, 1);
  std::vector<BenchRecord> out;
  for (unsigned n = 2; n <= 6; ++n)
    for (unsigned m : {8u, 12u, 16u, 20u}) {
      BenchRecord r;
      r.n = n;
      r.m = m;
      r.seconds_per_sample = predicted_sampling_time(n, m, t0) * (1.0 + noise * (2 * uniform01(rng) - 1));
      r.samples = 100;
      out.push_back(r);
    }
  return out;
}

TEST(FitT0, ExactRecovery) {
  const auto records = synthetic(1e-10, 0.0, 1);
  const FitResult fit = fit_T0(records);
  EXPECT_NEAR(fit.t0, 1e-10, 1e-13);
  EXPECT_NEAR(fit.t0, 1e-10, 1e-16);
  EXPECT_LT(fit.residual, 1e-12);
  ASSERT_EQ(fit.predicted.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    EXPECT_NEAR(fit.predicted[i], records[i].seconds_per_sample, 1e-9 * records[i].seconds_per_sample);
}

TEST(FitT0, NoisyRecovery) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto records = synthetic(1e-10, 0.05, seed);
    ASSERT_EQ(records.size(), 20u);
    EXPECT_NEAR(fit_T0(records).t0, 1e-10, 0.05e-10);
  }
}

TEST(FitT0, SingleRecord) {
  BenchRecord r;
  r.n = 3;
  r.m = 9;
  r.seconds_per_sample = 0.25;
  const std::vector<BenchRecord> one = {r};
  EXPECT_EQ(fit_T0(one).t0, 0.25 / sampling_time_factor(3, 9));
}

TEST(FitT0, LossyRecordsDoubleTheModes) {
  BenchRecord r;
  r.n = 3;
  r.m = 9;
  r.loss = 0.5;
  r.seconds_per_sample = 1.0;
  const std::vector<BenchRecord> one = {r};
  EXPECT_DOUBLE_EQ(fit_T0(one).t0, 1.0 / sampling_time_factor(3, 18));
}

TEST(FitT0, Errors) {
  EXPECT_THROW(fit_T0({}), Error);
  BenchRecord bad;
  bad.n = 2;
  bad.m = 4;
  bad.seconds_per_sample = 0.0;
  const std::vector<BenchRecord> one = {bad};
  EXPECT_THROW(fit_T0(one), Error);
}

}  // namespace
}  // namespace permflow
