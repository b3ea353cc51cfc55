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

#include "permflow/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "permflow/error.hpp"
#include "permflow/rng.hpp"

namespace permflow {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kShape, "matrix data has " + std::to_string(data_.size()) +
                                       " entries, expected " + std::to_string(rows_ * cols_));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::select(std::span<const std::size_t> row_indices,
                                    std::span<const std::size_t> col_indices) const {
  ComplexMatrix out(row_indices.size(), col_indices.size());
  for (std::size_t r = 0; r < row_indices.size(); ++r)
    for (std::size_t c = 0; c < col_indices.size(); ++c)
      out(r, c) = (*this)(row_indices[r], col_indices[c]);
  return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::kShape, "inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

double unitarity_defect(const ComplexMatrix& u) {
  const ComplexMatrix g = u.adjoint() * u;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

unsigned OccupationVector::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), 0u);
}

std::string OccupationVector::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    if (k != 0) out += ',';
    out += std::to_string(counts_[k]);
  }
  return out;
}

OccupationVector OccupationVector::parse(std::string_view text) {
  std::vector<unsigned> counts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    std::string_view field = text.substr(pos, end - pos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      throw Error(ErrorCode::kParse, "bad occupation entry '" + std::string(field) + "'");
    }
    counts.push_back(value);
    pos = end + 1;
  }
  return OccupationVector(std::move(counts));
}

long double ColumnScaling::factor() const {
  long double f = 1.0L;
  for (std::size_t j = 0; j < alphas.size(); ++j)
    for (unsigned e = 0; e < exponents[j]; ++e) f *= alphas[j];
  return f;
}

ComplexMatrix haar_random_unitary(std::size_t m, std::uint64_t seed) {
  if (m == 0) throw Error(ErrorCode::kInvalidDimension, "unitary dimension must be >= 1");
  Rng rng = make_rng(seed, kStreamUnitary);
  Eigen::MatrixXcd z(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of the factorisation: diag(R) real positive.
  for (std::size_t j = 0; j < m; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  ComplexMatrix u(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) u(i, j) = q(i, j);
  return u;
}

EffectiveMatrix build_effective_matrix(const ComplexMatrix& u, const OccupationVector& input,
                                       const OccupationVector& output) {
  if (!u.is_square()) throw Error(ErrorCode::kShape, "interferometer must be square");
  if (input.modes() != u.rows() || output.modes() != u.rows()) {
    throw Error(ErrorCode::kMismatch, "occupation vectors must have one entry per mode");
  }
  if (input.total() != output.total()) {
    throw Error(ErrorCode::kMismatch, "input has " + std::to_string(input.total()) +
                                          " photons, output has " + std::to_string(output.total()));
  }
  if (input.total() == 0) throw Error(ErrorCode::kEmptyState, "no photons");

  EffectiveMatrix eff;
  std::vector<unsigned> m, n;
  for (std::size_t k = 0; k < output.modes(); ++k)
    if (output[k] > 0) {
      eff.row_modes.push_back(k);
      m.push_back(output[k]);
    }
  for (std::size_t k = 0; k < input.modes(); ++k)
    if (input[k] > 0) {
      eff.col_modes.push_back(k);
      n.push_back(input[k]);
    }
  eff.matrix = u.select(eff.row_modes, eff.col_modes);
  eff.row_mult = OccupationVector(std::move(m));
  eff.col_mult = OccupationVector(std::move(n));
  return eff;
}

ComplexMatrix expand_multiplicities(const ComplexMatrix& a, const OccupationVector& row_mult,
                                    const OccupationVector& col_mult) {
  if (row_mult.modes() != a.rows() || col_mult.modes() != a.cols()) {
    throw Error(ErrorCode::kShape, "multiplicity vectors do not match the matrix shape");
  }
  if (row_mult.total() != col_mult.total()) {
    throw Error(ErrorCode::kMismatch, "row and column multiplicities have different totals");
  }
  std::vector<std::size_t> rows, cols;
  for (std::size_t k = 0; k < row_mult.modes(); ++k) rows.insert(rows.end(), row_mult[k], k);
  for (std::size_t k = 0; k < col_mult.modes(); ++k) cols.insert(cols.end(), col_mult[k], k);
  return a.select(rows, cols);
}

ScaledMatrix scale_columns(const ComplexMatrix& a) {
  return scale_columns(a, OccupationVector::ones(a.rows()), OccupationVector::ones(a.cols()));
}

ScaledMatrix scale_columns(const ComplexMatrix& a, const OccupationVector& row_mult,
                           const OccupationVector& col_mult) {
  if (a.empty()) throw Error(ErrorCode::kShape, "cannot scale an empty matrix");
  if (row_mult.modes() != a.rows() || col_mult.modes() != a.cols()) {
    throw Error(ErrorCode::kShape, "multiplicity vectors do not match the matrix shape");
  }
  ScaledMatrix out{a, {}};
  out.scaling.alphas.resize(a.cols());
  out.scaling.exponents.assign(col_mult.counts().begin(), col_mult.counts().end());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    // Quadrant sums with every delta = +1.
    Complex quadrant[4] = {};
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const Complex v = a(i, j) * static_cast<double>(row_mult[i]);
      const double re = v.real(), im = v.imag();
      if (re == 0.0 && im == 0.0) continue;
      if (re > 0.0 && im >= 0.0) quadrant[0] += v;
      else if (re <= 0.0 && im > 0.0) quadrant[1] += v;
      else if (re < 0.0 && im <= 0.0) quadrant[2] += v;
      else quadrant[3] += v;
    }
    // Folding opposite quadrants moves (I, III) into the first quadrant and
    // (II, IV) into the second. Combining the two folded vectors with both
    // components aligned bounds every signed sum, since a signed sum can
    // never exceed sum |Re| and sum |Im| componentwise.
    const Complex fold13 = quadrant[0] - quadrant[2];
    const Complex fold24 = quadrant[1] - quadrant[3];
    const Complex worst(fold13.real() - fold24.real(), fold13.imag() + fold24.imag());
    double alpha = std::abs(worst);
    if (!(alpha > 0.0)) alpha = 1.0;
    out.scaling.alphas[j] = alpha;
    out.scaling.log_product += col_mult[j] * std::log(alpha);
    for (std::size_t i = 0; i < a.rows(); ++i) out.matrix(i, j) /= alpha;
  }
  return out;
}

}  // namespace permflow
