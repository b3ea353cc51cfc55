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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permflow {

using Complex = std::complex<double>;

// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;

  // Rows and columns picked by index, in the given order. Indices may repeat.
  ComplexMatrix select(std::span<const std::size_t> row_indices,
                       std::span<const std::size_t> col_indices) const;

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// max_ij |(U^dagger U - I)_ij|.
double unitarity_defect(const ComplexMatrix& u);

// Photon counts per mode. Also used for row/column multiplicities.
class OccupationVector {
 public:
  OccupationVector() = default;
  explicit OccupationVector(std::vector<unsigned> counts) : counts_(std::move(counts)) {}
  OccupationVector(std::initializer_list<unsigned> counts) : counts_(counts) {}

  static OccupationVector ones(std::size_t modes) { return OccupationVector(std::vector<unsigned>(modes, 1)); }
  static OccupationVector zeros(std::size_t modes) { return OccupationVector(std::vector<unsigned>(modes, 0)); }

  std::size_t modes() const noexcept { return counts_.size(); }
  unsigned total() const noexcept;
  unsigned operator[](std::size_t k) const { return counts_[k]; }
  unsigned& operator[](std::size_t k) { return counts_[k]; }
  std::span<const unsigned> counts() const noexcept { return counts_; }

  // Comma separated counts, e.g. "1,0,2".
  std::string to_string() const;
  static OccupationVector parse(std::string_view text);

  auto operator<=>(const OccupationVector&) const = default;

 private:
  std::vector<unsigned> counts_;
};

// Per-column scale factors applied by scale_columns. A permanent computed on
// the scaled matrix is multiplied by factor() to recover the original value.
struct ColumnScaling {
  std::vector<double> alphas;
  std::vector<unsigned> exponents;  // column multiplicities N_j
  double log_product = 0.0;         // sum_j N_j ln(alpha_j)

  long double factor() const;
};

ComplexMatrix haar_random_unitary(std::size_t m, std::uint64_t seed);

// Compact form of U_ST: rows of U selected by the occupied output modes and
// columns by the occupied input modes, plus their multiplicities.
struct EffectiveMatrix {
  ComplexMatrix matrix;
  OccupationVector row_mult;  // M: nonzero entries of T
  OccupationVector col_mult;  // N: nonzero entries of S
  std::vector<std::size_t> row_modes;
  std::vector<std::size_t> col_modes;
};

EffectiveMatrix build_effective_matrix(const ComplexMatrix& u, const OccupationVector& input,
                                       const OccupationVector& output);

// Row k repeated M_k times, column j repeated N_j times.
ComplexMatrix expand_multiplicities(const ComplexMatrix& a, const OccupationVector& row_mult,
                                    const OccupationVector& col_mult);

struct ScaledMatrix {
  ComplexMatrix matrix;
  ColumnScaling scaling;
};

// Divides every column by an upper bound on max_delta |sum_i delta_i a_ij|,
// where each row i is counted row_mult[i] times. Afterwards every signed
// column sum has magnitude at most 1.
ScaledMatrix scale_columns(const ComplexMatrix& a);
ScaledMatrix scale_columns(const ComplexMatrix& a, const OccupationVector& row_mult,
                           const OccupationVector& col_mult);

}  // namespace permflow
