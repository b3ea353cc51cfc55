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

#include "permflow/graycode.hpp"

#include <algorithm>
#include <bit>

#include "permflow/error.hpp"

namespace permflow {

std::string to_string(GrayIndex value) {
  if (value == 0) return "0";
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

unsigned changed_bit_position(GrayIndex i) {
  if (i == 0) throw Error(ErrorCode::kNoTransition, "index 0 has no predecessor");
  const auto low = static_cast<std::uint64_t>(i);
  if (low != 0) return static_cast<unsigned>(std::countr_zero(low));
  return 64 + static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(i >> 64)));
}

BinaryGrayState BinaryGrayState::at(GrayIndex index) {
  BinaryGrayState s;
  s.index = index;
  s.code = binary_gray(index);
  s.parity = (std::popcount(static_cast<std::uint64_t>(s.code)) +
              std::popcount(static_cast<std::uint64_t>(s.code >> 64))) %
                 2 !=
             0;
  return s;
}

unsigned BinaryGrayState::step() {
  ++index;
  const unsigned bit = changed_bit_position(index);
  code ^= GrayIndex{1} << bit;
  parity = !parity;
  return bit;
}

GrayIndex NaryGrayState::length(std::span<const unsigned> limits) {
  GrayIndex total = 1;
  for (unsigned limit : limits) {
    const GrayIndex radix = GrayIndex{limit} + 1;
    if (total > (~GrayIndex{0}) / radix) throw Error(ErrorCode::kOverflow, "Gray counter range overflows 128 bits");
    total *= radix;
  }
  return total;
}

NaryGrayState::NaryGrayState(std::vector<unsigned> limits, GrayIndex start_index)
    : limits_(std::move(limits)),
      digits_(limits_.size(), 0),
      forward_(limits_.size(), 1),
      index_(start_index),
      total_(length(limits_)) {
  if (start_index >= total_) {
    throw Error(ErrorCode::kRange, "start index " + to_string(start_index) + " outside [0, " +
                                       to_string(total_) + ")");
  }
  // Mixed-radix decomposition, least significant digit first. The remaining
  // quotient after digit k is the index of the enclosing block of digit k;
  // digit k runs backwards inside odd blocks.
  GrayIndex rest = start_index;
  unsigned digit_sum = 0;
  for (std::size_t k = 0; k < limits_.size(); ++k) {
    const GrayIndex radix = GrayIndex{limits_[k]} + 1;
    const auto plain = static_cast<unsigned>(rest % radix);
    rest /= radix;
    const bool fwd = (rest % 2) == 0;
    forward_[k] = fwd ? 1 : 0;
    digits_[k] = fwd ? plain : limits_[k] - plain;
    digit_sum += digits_[k];
  }
  parity_ = (digit_sum % 2) != 0;
}

NaryGrayState::Step NaryGrayState::step() {
  if (exhausted()) throw Error(ErrorCode::kExhausted, "Gray counter has no further states");
  for (std::size_t k = 0; k < digits_.size(); ++k) {
    const bool fwd = forward_[k] != 0;
    const bool can_move = fwd ? digits_[k] < limits_[k] : digits_[k] > 0;
    if (!can_move) {
      // Digits below the moving one sit at an end and reverse direction.
      forward_[k] = fwd ? 0 : 1;
      continue;
    }
    const int change = fwd ? 1 : -1;
    digits_[k] = static_cast<unsigned>(static_cast<int>(digits_[k]) + change);
    ++index_;
    parity_ = !parity_;
    return {k, change, parity_};
  }
  throw Error(ErrorCode::kInvariant, "Gray counter found no movable digit");
}

std::vector<IndexRange> partition(GrayIndex total, std::size_t workers) {
  if (workers == 0) throw Error(ErrorCode::kRange, "at least one worker is required");
  std::vector<IndexRange> ranges;
  ranges.reserve(workers);
  const GrayIndex base = total / workers;
  const GrayIndex extra = total % workers;
  GrayIndex begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const GrayIndex size = base + (GrayIndex{w} < extra ? 1 : 0);
    ranges.push_back({begin, begin + size});
    begin += size;
  }
  return ranges;
}

std::vector<IndexRange> partition_leading_digits(std::span<const unsigned> limits,
                                                 std::size_t max_blocks) {
  if (max_blocks == 0) throw Error(ErrorCode::kRange, "at least one block is required");
  const GrayIndex total = NaryGrayState::length(limits);
  // Fix digits from the most significant end while the block count fits.
  GrayIndex blocks = 1;
  for (std::size_t k = limits.size(); k-- > 0;) {
    const GrayIndex radix = GrayIndex{limits[k]} + 1;
    if (blocks * radix > max_blocks) break;
    blocks *= radix;
  }
  const GrayIndex block_size = total / blocks;
  std::vector<IndexRange> ranges;
  ranges.reserve(static_cast<std::size_t>(blocks));
  for (GrayIndex b = 0; b < blocks; ++b) ranges.push_back({b * block_size, (b + 1) * block_size});
  return ranges;
}

}  // namespace permflow
