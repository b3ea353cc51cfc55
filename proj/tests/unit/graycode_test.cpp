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

#include <gtest/gtest.h>

#include <bit>
#include <set>

#include "permflow/error.hpp"
#include "permflow/rng.hpp"

namespace permflow {
namespace {

// Table I of the reflected 3-bit code.
constexpr unsigned kTable[8] = {0b000, 0b001, 0b011, 0b010, 0b110, 0b111, 0b101, 0b100};

std::vector<unsigned> digits_of(const NaryGrayState& s) { return {s.digits().begin(), s.digits().end()}; }

TEST(BinaryGray, TableValues) {
  for (unsigned i = 0; i < 8; ++i) EXPECT_EQ(binary_gray(i), GrayIndex{kTable[i]}) << i;
  EXPECT_EQ(binary_gray(0), GrayIndex{0b000});
  EXPECT_EQ(binary_gray(5), GrayIndex{0b111});
  EXPECT_EQ(binary_gray(6), GrayIndex{0b101});
}

TEST(BinaryGray, ChangedBitPosition) {
  EXPECT_EQ(changed_bit_position(1), 0u);
  EXPECT_EQ(changed_bit_position(4), 2u);
  EXPECT_EQ(changed_bit_position(6), 1u);
  EXPECT_EQ(changed_bit_position(GrayIndex{1} << 100), 100u);
  EXPECT_THROW(changed_bit_position(0), Error);
  try {
    changed_bit_position(0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoTransition);
  }
}

TEST(BinaryGray, SingleBitChangeExhaustive) {
  for (std::uint64_t i = 1; i < (1u << 20); ++i) {
    const auto diff = static_cast<std::uint64_t>(binary_gray(i) ^ binary_gray(i - 1));
    ASSERT_EQ(std::popcount(diff), 1) << i;
    ASSERT_EQ(static_cast<unsigned>(std::countr_zero(diff)), changed_bit_position(i)) << i;
  }
}

TEST(BinaryGray, StateStepMatchesDirectPositioning) {
  BinaryGrayState s = BinaryGrayState::at(0);
  for (std::uint64_t i = 1; i < 5000; ++i) {
    s.step();
    const BinaryGrayState direct = BinaryGrayState::at(i);
    ASSERT_EQ(s.code, direct.code);
    ASSERT_EQ(s.parity, direct.parity);
    ASSERT_EQ(s.parity, std::popcount(static_cast<std::uint64_t>(s.code)) % 2 == 1);
  }
  const GrayIndex big = (GrayIndex{1} << 90) + 12345;
  BinaryGrayState far = BinaryGrayState::at(big);
  far.step();
  EXPECT_EQ(far.code, binary_gray(big + 1));
}

TEST(NaryGray, BinaryIsTheTwoAryCase) {
  const NaryGrayState s({1, 1, 1}, 5);
  EXPECT_EQ(digits_of(s), (std::vector<unsigned>{1, 1, 1}));
  NaryGrayState walk({1, 1, 1}, 0);
  for (unsigned i = 0; i < 8; ++i) {
    for (unsigned k = 0; k < 3; ++k) EXPECT_EQ(walk.digits()[k], (kTable[i] >> k) & 1u) << i;
    if (i < 7) walk.step();
  }
  EXPECT_TRUE(walk.exhausted());
}

TEST(NaryGray, SingleDigitWalk) {
  NaryGrayState s({2}, 0);
  EXPECT_EQ(digits_of(s), (std::vector<unsigned>{0}));
  EXPECT_FALSE(s.parity());
  for (unsigned expected = 1; expected <= 2; ++expected) {
    const auto step = s.step();
    EXPECT_EQ(step.digit, 0u);
    EXPECT_EQ(step.change, 1);
    EXPECT_EQ(s.digits()[0], expected);
  }
  try {
    s.step();
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExhausted);
  }
}

TEST(NaryGray, StartIndexOutOfRange) {
  try {
    NaryGrayState({1, 2}, 6);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRange);
  }
}

// Walks the full sequence and checks the counter laws, then compares every
// position against direct initialization.
void check_laws(const std::vector<unsigned>& limits) {
  const GrayIndex total = NaryGrayState::length(limits);
  NaryGrayState s(limits, 0);
  std::set<std::vector<unsigned>> seen;
  std::vector<std::vector<unsigned>> sequence;
  std::vector<std::vector<std::uint8_t>> directions;
  for (GrayIndex i = 0; i < total; ++i) {
    auto digits = digits_of(s);
    for (std::size_t k = 0; k < limits.size(); ++k) ASSERT_LE(digits[k], limits[k]);
    unsigned sum = 0;
    for (unsigned d : digits) sum += d;
    ASSERT_EQ(s.parity(), sum % 2 == 1);
    ASSERT_TRUE(seen.insert(digits).second) << "repeated state";
    sequence.push_back(digits);
    if (i + 1 == total) break;
    const auto before = digits;
    const auto step = s.step();
    const auto after = digits_of(s);
    for (std::size_t k = 0; k < limits.size(); ++k) {
      if (k == step.digit) {
        ASSERT_EQ(static_cast<int>(after[k]) - static_cast<int>(before[k]), step.change);
      } else {
        ASSERT_EQ(after[k], before[k]);
      }
    }
    ASSERT_EQ(step.parity, s.parity());
  }
  ASSERT_EQ(seen.size(), static_cast<std::size_t>(total));
  for (GrayIndex i = 0; i < total; ++i) {
    NaryGrayState direct(limits, i);
    ASSERT_EQ(digits_of(direct), sequence[static_cast<std::size_t>(i)]) << "index " << to_string(i);
    ASSERT_EQ(direct.index(), i);
    // The directions must let the positioned counter continue the walk.
    if (i + 1 < total) {
      direct.step();
      ASSERT_EQ(digits_of(direct), sequence[static_cast<std::size_t>(i + 1)]) << "index " << to_string(i);
    }
  }
}

TEST(NaryGray, SmallLimitsExhaustive) {
  check_laws({1, 2});
  check_laws({2, 1});
  check_laws({3});
  check_laws({1, 1, 1, 1});
  check_laws({4, 4, 4});
}

TEST(NaryGray, RandomLimitVectors) {
  Rng rng = make_rng(2024, 1);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<unsigned> limits(1 + uniform_below(rng, 6));
    for (unsigned& l : limits) l = 1 + static_cast<unsigned>(uniform_below(rng, 4));
    check_laws(limits);
  }
}

TEST(NaryGray, LengthIsProductOfRadices) {
  EXPECT_EQ(NaryGrayState::length(std::vector<unsigned>{1, 2}), GrayIndex{6});
  EXPECT_EQ(NaryGrayState::length(std::vector<unsigned>{}), GrayIndex{1});
  const std::vector<unsigned> huge(130, 1);
  EXPECT_THROW(NaryGrayState::length(huge), Error);
}

TEST(Partition, Examples) {
  EXPECT_EQ(partition(8, 4), (std::vector<IndexRange>{{0, 2}, {2, 4}, {4, 6}, {6, 8}}));
  const auto seven = partition(7, 3);
  EXPECT_EQ(seven, (std::vector<IndexRange>{{0, 3}, {3, 5}, {5, 7}}));
  EXPECT_EQ(partition(0, 2), (std::vector<IndexRange>{{0, 0}, {0, 0}}));
  EXPECT_THROW(partition(4, 0), Error);
}

TEST(Partition, PowerOfTwoSplitFixesLeadingBits) {
  const unsigned n = 12;
  const GrayIndex total = GrayIndex{1} << (n - 1);
  const auto ranges = partition(total, 8);
  ASSERT_EQ(ranges.size(), 8u);
  for (std::size_t w = 0; w < ranges.size(); ++w) {
    EXPECT_EQ(ranges[w].size(), total / 8);
    const GrayIndex top = binary_gray(ranges[w].begin) >> (n - 4);
    for (GrayIndex i = ranges[w].begin; i < ranges[w].end; ++i) ASSERT_EQ(binary_gray(i) >> (n - 4), top);
  }
}

TEST(Partition, SizesDifferByAtMostOne) {
  for (std::uint64_t total : {0u, 1u, 5u, 97u, 1024u})
    for (std::size_t workers : {1u, 2u, 3u, 7u, 64u}) {
      const auto r = partition(total, workers);
      GrayIndex lo = ~GrayIndex{0}, hi = 0, next = 0;
      for (const IndexRange& x : r) {
        EXPECT_EQ(x.begin, next);
        next = x.end;
        lo = std::min(lo, x.size());
        hi = std::max(hi, x.size());
      }
      EXPECT_EQ(next, GrayIndex{total});
      EXPECT_LE(hi - lo, GrayIndex{1});
    }
}

TEST(Partition, LeadingDigitBlocks) {
  const std::vector<unsigned> limits{2, 1, 3, 2};
  const auto blocks = partition_leading_digits(limits, 8);
  // Top digit has radix 3 and the next radix 4: 3 * 4 > 8, so only one digit is fixed.
  ASSERT_EQ(blocks.size(), 3u);
  GrayIndex next = 0;
  for (const IndexRange& b : blocks) {
    EXPECT_EQ(b.begin, next);
    next = b.end;
    const NaryGrayState first(limits, b.begin);
    for (GrayIndex i = b.begin; i < b.end; ++i) {
      ASSERT_EQ(NaryGrayState(limits, i).digits()[3], first.digits()[3]);
    }
  }
  EXPECT_EQ(next, NaryGrayState::length(limits));
}

}  // namespace
}  // namespace permflow
