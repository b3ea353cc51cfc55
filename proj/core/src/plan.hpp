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

// Internal helpers shared by the floating-point, multiprecision and
// fixed-point BB/FG kernels.

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "permflow/graycode.hpp"
#include "permflow/linalg.hpp"
#include "permflow/permanent.hpp"

namespace permflow::detail {

// Row bookkeeping for the multiplicity-aware BB/FG sum. The first copy of
// `fixed_row` carries delta = +1; every Gray digit k stands for the remaining
// copies of row digit_rows[k] and counts how many of them carry delta = -1.
struct RepeatedPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t fixed_row = 0;
  std::vector<std::size_t> digit_rows;
  std::vector<unsigned> digit_limits;
  std::vector<unsigned> col_mult;
  unsigned photons = 0;  // sum of row multiplicities
  GrayIndex addends = 1;
};

// Applies the first-row convention: a row of multiplicity one (the first
// such) becomes the fixed row; otherwise the fixed copy is split off row 0.
// `binary_leading` additional single-copy digits are placed at the most
// significant end, split off the smallest multiplicities when needed.
RepeatedPlan make_repeated_plan(std::size_t rows, std::size_t cols, const OccupationVector& row_mult,
                                const OccupationVector& col_mult, bool require_balanced,
                                unsigned binary_leading = 0);

std::vector<IndexRange> make_grid(std::span<const unsigned> limits, const EngineOptions& options);

// Exact binomial coefficient; fits for n <= 62.
std::uint64_t binomial(unsigned n, unsigned k);

// Runs fn(c) for every chunk index c in [0, chunks). Chunks are dealt out to
// workers as contiguous runs; the first exception is rethrown.
template <class Fn>
void run_chunks(std::size_t chunks, std::size_t workers, Fn&& fn) {
  if (workers <= 1 || chunks <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  const auto runs = partition(chunks, workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> threads;
    threads.reserve(runs.size());
    for (const IndexRange& run : runs) {
      if (run.size() == 0) continue;
      threads.emplace_back([&, run] {
        try {
          for (auto c = static_cast<std::size_t>(run.begin); c < static_cast<std::size_t>(run.end); ++c) fn(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace permflow::detail
