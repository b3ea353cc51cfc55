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

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace permflow {

// Minimal complex arithmetic used inside the engines. Unlike std::complex
// the product has no NaN/Inf recovery branches, which keeps the inner loops
// branch-free and the rounding sequence explicit.
template <typename Real>
struct Cplx {
  Real re{};
  Real im{};

  constexpr Cplx() = default;
  constexpr Cplx(Real r, Real i = Real{}) : re(r), im(i) {}
  template <typename Other>
  explicit constexpr Cplx(const std::complex<Other>& z) : re(static_cast<Real>(z.real())), im(static_cast<Real>(z.imag())) {}

  constexpr Cplx& operator+=(const Cplx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  constexpr Cplx& operator-=(const Cplx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  constexpr Cplx& operator*=(const Cplx& o) {
    const Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  constexpr Cplx& operator*=(Real s) {
    re *= s;
    im *= s;
    return *this;
  }
  friend constexpr Cplx operator+(Cplx a, const Cplx& b) { return a += b; }
  friend constexpr Cplx operator-(Cplx a, const Cplx& b) { return a -= b; }
  friend constexpr Cplx operator*(Cplx a, const Cplx& b) { return a *= b; }
  friend constexpr Cplx operator*(Cplx a, Real s) { return a *= s; }
  friend constexpr Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }

  std::complex<long double> to_std() const {
    return {static_cast<long double>(re), static_cast<long double>(im)};
  }
};

// Neumaier's variant of Kahan summation.
template <typename Real>
class CompensatedSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_{};
  Real comp_{};
};

// Magnitude-bucketed ("pocket") summation. An addend goes to the pocket of
// its binary exponent divided by the bucket width; each pocket is summed with
// compensation and the pockets are merged from the smallest magnitude up.
template <typename Real>
class PocketAccumulator {
 public:
  static constexpr int kDefaultBucketWidth = 64;

  explicit PocketAccumulator(int bucket_width = kDefaultBucketWidth)
      : bucket_width_(bucket_width),
        pockets_(static_cast<std::size_t>((kMaxExponent - kMinExponent) / bucket_width + 1)) {}

  void add(const Cplx<Real>& z) {
    const Real mag = std::max(std::abs(z.re), std::abs(z.im));
    if (mag == Real{}) return;
    const int exponent = std::ilogb(mag);
    auto& pocket = pockets_[static_cast<std::size_t>((exponent - kMinExponent) / bucket_width_)];
    pocket.re.add(z.re);
    pocket.im.add(z.im);
  }

  Cplx<Real> finalize() const {
    CompensatedSum<Real> re, im;
    for (const auto& pocket : pockets_) {
      re.add(pocket.re.value());
      im.add(pocket.im.value());
    }
    return {re.value(), im.value()};
  }

  int bucket_width() const noexcept { return bucket_width_; }
  std::size_t pocket_count() const noexcept { return pockets_.size(); }

 private:
  static constexpr int kMinExponent = std::numeric_limits<Real>::min_exponent - std::numeric_limits<Real>::digits - 1;
  static constexpr int kMaxExponent = std::numeric_limits<Real>::max_exponent;

  struct Pocket {
    CompensatedSum<Real> re;
    CompensatedSum<Real> im;
  };

  int bucket_width_;
  std::vector<Pocket> pockets_;
};

// Running sum used by the engines: plain left-to-right or pocketed.
template <typename Real>
class Accumulator {
 public:
  explicit Accumulator(bool pockets) {
    if (pockets) pockets_.emplace();
  }

  void add(const Cplx<Real>& z) {
    if (pockets_) {
      pockets_->add(z);
    } else {
      plain_ += z;
    }
  }
  Cplx<Real> value() const { return pockets_ ? pockets_->finalize() : plain_; }

 private:
  Cplx<Real> plain_{};
  std::optional<PocketAccumulator<Real>> pockets_;
};

}  // namespace permflow
