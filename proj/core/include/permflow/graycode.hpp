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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace permflow {

// Enumeration positions are 128-bit so that counters for up to 64 binary
// digits (or the equivalent mixed-radix range) are representable.
__extension__ typedef unsigned __int128 GrayIndex;

std::string to_string(GrayIndex value);

constexpr GrayIndex binary_gray(GrayIndex i) noexcept { return i ^ (i >> 1); }

// The single bit that differs between binary_gray(i - 1) and binary_gray(i):
// the lowest set bit of i. Throws ErrorCode::kNoTransition for i == 0.
unsigned changed_bit_position(GrayIndex i);

struct BinaryGrayState {
  GrayIndex index = 0;
  GrayIndex code = 0;
  bool parity = false;  // odd number of set bits in code

  static BinaryGrayState at(GrayIndex index);
  // Advances to index + 1 and returns the bit that flipped.
  unsigned step();
};

// Reflected mixed-radix (n-ary) Gray counter. Digit k ranges over
// 0..limits[k]; digit 0 changes fastest. Neighbouring states differ in one
// digit by +-1, and any position can be reached in O(#digits).
class NaryGrayState {
 public:
  struct Step {
    std::size_t digit;
    int change;   // +1 or -1
    bool parity;  // parity of the digit sum after the step
  };

  NaryGrayState(std::vector<unsigned> limits, GrayIndex start_index);

  // Total number of states, prod_k (limits[k] + 1).
  static GrayIndex length(std::span<const unsigned> limits);

  Step step();

  GrayIndex index() const noexcept { return index_; }
  GrayIndex total() const noexcept { return total_; }
  bool parity() const noexcept { return parity_; }
  bool exhausted() const noexcept { return index_ + 1 >= total_; }
  std::span<const unsigned> digits() const noexcept { return digits_; }
  std::span<const unsigned> limits() const noexcept { return limits_; }
  bool forward(std::size_t k) const { return forward_[k] != 0; }

 private:
  std::vector<unsigned> limits_;
  std::vector<unsigned> digits_;
  std::vector<std::uint8_t> forward_;
  GrayIndex index_ = 0;
  GrayIndex total_ = 1;
  bool parity_ = false;
};

struct IndexRange {
  GrayIndex begin = 0;
  GrayIndex end = 0;

  GrayIndex size() const noexcept { return end - begin; }
  bool operator==(const IndexRange&) const = default;
};

// Contiguous split of [0, total) into `workers` ranges whose sizes differ by
// at most one; the larger ranges come first.
std::vector<IndexRange> partition(GrayIndex total, std::size_t workers);

// Split of the mixed-radix index space along its most significant digits:
// every range holds the positions sharing one value of the leading digits.
// As many leading digits are fixed as fit within `max_blocks` ranges.
std::vector<IndexRange> partition_leading_digits(std::span<const unsigned> limits,
                                                 std::size_t max_blocks);

}  // namespace permflow
