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

#include "permflow/sampling.hpp"

#include <Eigen/Dense>
#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <string>

#include "permflow/error.hpp"
#include "plan.hpp"

namespace permflow {

namespace {

long double factorial_product(const OccupationVector& v) {
  long double p = 1.0L;
  for (unsigned c : v.counts())
    for (unsigned k = 2; k <= c; ++k) p *= k;
  return p;
}

std::complex<long double> permanent_with(Engine engine, const ComplexMatrix& a, const OccupationVector& rows,
                                         const OccupationVector& cols) {
  switch (engine) {
    case Engine::kBbfgRepeated: return perm_bbfg_repeated(a, rows, cols).value;
    case Engine::kBbfgGray: return perm_bbfg(expand_multiplicities(a, rows, cols), true).value;
    case Engine::kRyser: return perm_ryser(expand_multiplicities(a, rows, cols)).value;
    case Engine::kNaive: return perm_naive(expand_multiplicities(a, rows, cols)).value;
    default: break;
  }
  throw Error(ErrorCode::kRange, "sampler does not support engine " + std::string(to_string(engine)));
}

void check_sampler_input(const ComplexMatrix& u, const OccupationVector& input) {
  if (!u.is_square() || u.rows() == 0) throw Error(ErrorCode::kShape, "interferometer must be square");
  if (input.modes() != u.rows()) throw Error(ErrorCode::kMismatch, "input state must have one entry per mode");
}

// Positions of the nonzero entries and their counts.
void compress(std::span<const unsigned> counts, std::vector<std::size_t>& modes, std::vector<unsigned>& mult) {
  modes.clear();
  mult.clear();
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k] > 0) {
      modes.push_back(k);
      mult.push_back(counts[k]);
    }
}

template <class Draw>
std::vector<SampleRecord> run_samples(std::size_t count, std::size_t workers, std::uint64_t seed, Engine engine,
                                      const OccupationVector& input, Draw&& draw) {
  std::vector<SampleRecord> records(count);
  detail::run_chunks(count, workers, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    SampleRecord& r = records[i];
    r.seed = derive_seed(seed, i);
    Rng rng(r.seed);
    r.output_state = draw(rng);
    r.input_state = input;
    r.engine = engine;
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return records;
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::kRange, "transmission " + std::to_string(eta) + " outside [0, 1]");
  }
}

OccupationVector truncate(const OccupationVector& v, std::size_t modes) {
  return OccupationVector(std::vector<unsigned>(v.counts().begin(), v.counts().begin() + static_cast<long>(modes)));
}

std::map<OccupationVector, double> histogram(std::span<const SampleRecord> samples) {
  std::map<OccupationVector, double> h;
  if (samples.empty()) return h;
  const double w = 1.0 / static_cast<double>(samples.size());
  for (const SampleRecord& s : samples) h[s.output_state] += w;
  return h;
}

double tvd(const std::map<OccupationVector, double>& p, const std::map<OccupationVector, double>& q) {
  double sum = 0.0;
  for (const auto& [state, prob] : p) {
    const auto it = q.find(state);
    sum += std::abs(prob - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [state, prob] : q)
    if (!p.contains(state)) sum += prob;
  return 0.5 * sum;
}

}  // namespace

double output_probability(const ComplexMatrix& u, const OccupationVector& input, const OccupationVector& output) {
  const EffectiveMatrix eff = build_effective_matrix(u, input, output);
  const std::complex<long double> p = perm_bbfg_repeated(eff.matrix, eff.row_mult, eff.col_mult).value;
  return static_cast<double>(std::norm(p) / (factorial_product(input) * factorial_product(output)));
}

std::uint64_t outcome_count(std::size_t modes, unsigned photons) {
  if (modes == 0) return photons == 0 ? 1 : 0;
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), modes + photons - 1, photons);
  if (!c.fits_ulong_p()) return std::numeric_limits<std::uint64_t>::max();
  return c.get_ui();
}

std::map<OccupationVector, double> brute_force_distribution(const ComplexMatrix& u, const OccupationVector& input) {
  check_sampler_input(u, input);
  const std::size_t m = u.rows();
  const unsigned n = input.total();
  if (n == 0) throw Error(ErrorCode::kEmptyState, "no photons");
  const std::uint64_t outcomes = outcome_count(m, n);
  if (outcomes > kBruteForceMaxOutcomes) {
    throw Error(ErrorCode::kSizeGuard, std::to_string(outcomes) + " outcomes exceed the brute-force limit of " +
                                           std::to_string(kBruteForceMaxOutcomes));
  }
  std::map<OccupationVector, double> dist;
  std::vector<unsigned> counts(m, 0);
  auto recurse = [&](auto& self, std::size_t mode, unsigned left) -> void {
    if (mode + 1 == m) {
      counts[mode] = left;
      const OccupationVector t(counts);
      dist.emplace(t, output_probability(u, input, t));
      return;
    }
    for (unsigned c = left + 1; c-- > 0;) {
      counts[mode] = c;
      self(self, mode + 1, left - c);
    }
  };
  recurse(recurse, 0, n);
  return dist;
}

OccupationVector sample_one(const ComplexMatrix& u, const OccupationVector& input, Rng& rng, Engine engine) {
  check_sampler_input(u, input);
  const std::size_t m = u.rows();
  const unsigned n = input.total();

  std::vector<std::size_t> columns;
  for (std::size_t k = 0; k < m; ++k) columns.insert(columns.end(), input[k], k);
  for (std::size_t i = columns.size(); i > 1; --i) {
    std::swap(columns[i - 1], columns[static_cast<std::size_t>(uniform_below(rng, i))]);
  }

  std::vector<unsigned> out(m, 0), col_counts(m, 0);
  std::vector<std::size_t> row_modes, col_modes;
  std::vector<unsigned> row_mult, col_mult;
  std::vector<double> weights(m);
  for (unsigned k = 0; k < n; ++k) {
    ++col_counts[columns[k]];
    compress(col_counts, col_modes, col_mult);
    const OccupationVector cmult(col_mult);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      ++out[j];
      compress(out, row_modes, row_mult);
      const ComplexMatrix sub = u.select(row_modes, col_modes);
      weights[j] = static_cast<double>(std::norm(permanent_with(engine, sub, OccupationVector(row_mult), cmult)));
      total += weights[j];
      --out[j];
    }
    if (!(total > 0.0)) {
      throw Error(ErrorCode::kDegenerate, "all candidate weights vanish at photon " + std::to_string(k + 1));
    }
    const double target = uniform01(rng) * total;
    double cumulative = 0.0;
    std::size_t pick = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (weights[j] == 0.0) continue;
      cumulative += weights[j];
      pick = j;
      if (cumulative > target) break;
    }
    ++out[pick];
  }
  return OccupationVector(std::move(out));
}

std::vector<SampleRecord> sample_ideal(const ComplexMatrix& u, const OccupationVector& input, std::size_t count,
                                       std::uint64_t seed, const SamplerOptions& options) {
  check_sampler_input(u, input);
  if (input.total() == 0) throw Error(ErrorCode::kEmptyState, "no photons");
  return run_samples(count, options.workers, seed, options.engine, input,
                     [&](Rng& rng) { return sample_one(u, input, rng, options.engine); });
}

ComplexMatrix dilate_lossy(const ComplexMatrix& u, double eta) {
  if (!u.is_square() || u.rows() == 0) throw Error(ErrorCode::kShape, "interferometer must be square");
  check_eta(eta);
  const std::size_t m = u.rows();
  const double t = std::sqrt(eta), r = std::sqrt(1.0 - eta);
  ComplexMatrix w(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      w(i, j) = t * u(i, j);
      w(m + i, j) = r * u(i, j);
    }
    w(i, m + i) = r;
    w(m + i, m + i) = -t;
  }
  return w;
}

ComplexMatrix dilate_lossy(const ComplexMatrix& u, std::span<const double> etas) {
  if (!u.is_square() || u.rows() == 0) throw Error(ErrorCode::kShape, "interferometer must be square");
  const std::size_t m = u.rows();
  if (etas.size() != m) throw Error(ErrorCode::kMismatch, "one transmission per mode is required");
  for (double eta : etas) check_eta(eta);

  using Mat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;
  Mat t(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) t(i, j) = std::sqrt(etas[i]) * u(i, j);
  const Eigen::JacobiSVD<Mat> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd defect(m);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m); ++k) {
    const double s = svd.singularValues()(k);
    const double d = 1.0 - s * s;
    if (d < -1e-12 || !std::isfinite(d)) {
      throw Error(ErrorCode::kNumerical, "transfer matrix has singular value " + std::to_string(s) + " > 1");
    }
    defect(k) = std::sqrt(std::max(d, 0.0));
  }
  const Mat left = svd.matrixU() * defect.asDiagonal() * svd.matrixU().adjoint();
  const Mat right = svd.matrixV() * defect.asDiagonal() * svd.matrixV().adjoint();
  const Mat tadj = t.adjoint();

  ComplexMatrix w(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      w(i, j) = t(ii, jj);
      w(i, m + j) = left(ii, jj);
      w(m + i, j) = right(ii, jj);
      w(m + i, m + j) = -tadj(ii, jj);
    }
  return w;
}

namespace {

std::vector<SampleRecord> sample_dilated(const ComplexMatrix& w, const OccupationVector& input, std::size_t count,
                                         std::uint64_t seed, const SamplerOptions& options) {
  const std::size_t m = input.modes();
  std::vector<unsigned> padded(input.counts().begin(), input.counts().end());
  padded.resize(2 * m, 0);
  const OccupationVector wide(std::move(padded));
  return run_samples(count, options.workers, seed, options.engine, input,
                     [&](Rng& rng) { return truncate(sample_one(w, wide, rng, options.engine), m); });
}

}  // namespace

std::vector<SampleRecord> sample_lossy(const ComplexMatrix& u, const OccupationVector& input, double eta,
                                       std::size_t count, std::uint64_t seed, LossStrategy strategy,
                                       const SamplerOptions& options) {
  check_sampler_input(u, input);
  check_eta(eta);
  if (input.total() == 0) throw Error(ErrorCode::kEmptyState, "no photons");
  if (strategy == LossStrategy::kDilation) return sample_dilated(dilate_lossy(u, eta), input, count, seed, options);

  return run_samples(count, options.workers, seed, options.engine, input, [&](Rng& rng) {
    OccupationVector kept = OccupationVector::zeros(input.modes());
    for (std::size_t k = 0; k < input.modes(); ++k)
      for (unsigned p = 0; p < input[k]; ++p)
        if (uniform01(rng) < eta) ++kept[k];
    if (kept.total() == 0) return kept;
    return sample_one(u, kept, rng, options.engine);
  });
}

std::vector<SampleRecord> sample_lossy(const ComplexMatrix& u, const OccupationVector& input,
                                       std::span<const double> etas, std::size_t count, std::uint64_t seed,
                                       const SamplerOptions& options) {
  check_sampler_input(u, input);
  if (input.total() == 0) throw Error(ErrorCode::kEmptyState, "no photons");
  return sample_dilated(dilate_lossy(u, etas), input, count, seed, options);
}

double total_variation(const std::map<OccupationVector, double>& exact, std::span<const SampleRecord> samples) {
  return tvd(exact, histogram(samples));
}

double total_variation(std::span<const SampleRecord> a, std::span<const SampleRecord> b) {
  return tvd(histogram(a), histogram(b));
}

}  // namespace permflow
