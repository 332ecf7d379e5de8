// Copyright 2026 The Lexiprec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexiprec/theory.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <vector>

#include "lexiprec/preference.hpp"

namespace lexiprec::theory {
namespace {

TEST(BinomialTest, SmallAndLarge) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(5, 0), 1);
  EXPECT_EQ(binomial(5, 6), 0);
  // C(100, 50) from Pascal's rule.
  std::vector<BigInt> row{1};
  for (int n = 1; n <= 100; ++n) {
    std::vector<BigInt> next(n + 1, 1);
    for (int k = 1; k < n; ++k) next[k] = row[k - 1] + row[k];
    row = std::move(next);
  }
  EXPECT_EQ(binomial(100, 50), row[50]);
}

TEST(TieProbabilityTest, Examples) {
  EXPECT_EQ(tie_probability(5, 2, 1), make_rational(4, 10));
  EXPECT_EQ(tie_probability(5, 2, 4), make_rational(1, 10));
  for (std::uint64_t r1 = 1; r1 <= 7; ++r1) {
    EXPECT_EQ(tie_probability(7, 1, r1), make_rational(1, 7));
  }
  EXPECT_THROW(tie_probability(5, 2, 5), DataError);
  EXPECT_THROW(tie_probability(5, 2, 0), DataError);
  EXPECT_THROW(tie_probability(5, 0, 1), DataError);
}

TEST(TieProbabilityTest, SumsToOneAtLargeCorpus) {
  Rational total = 0;
  for (std::uint64_t r1 = 1; r1 <= 2000 - 5 + 1; ++r1) total += tie_probability(2000, 5, r1);
  EXPECT_EQ(total, Rational(1));
}

TEST(TieProbabilityTest, MatchesEnumeration) {
  for (std::uint32_t d = 1; d <= 12; ++d) {
    for (std::uint32_t r = 1; r <= std::min<std::uint32_t>(d, 4); ++r) {
      std::map<std::uint32_t, std::int64_t> first;
      std::int64_t total = 0;
      for_each_arrangement(d, r, [&](std::span<const std::uint32_t> a) {
        ++first[a[0]];
        ++total;
      });
      for (std::uint32_t r1 = 1; r1 <= d - r + 1; ++r1) {
        EXPECT_EQ(tie_probability(d, r, r1), make_rational(first[r1], total))
            << "D=" << d << " R=" << r << " r1=" << r1;
      }
    }
  }
}

TEST(ValueCountRatioTest, Examples) {
  EXPECT_EQ(value_count_ratio(10, 2, 0), Rational(1));
  EXPECT_EQ(value_count_ratio(10, 2, 1), make_rational(8, 3));
  EXPECT_EQ(value_count_ratio(10, 2, 2), make_rational(14, 3));
  EXPECT_THROW(value_count_ratio(10, 8, 3), DataError);
}

TEST(ValueCountRatioTest, ScalingLaw) {
  for (std::uint64_t d = 0; d <= 30; ++d) {
    for (std::uint64_t r = 0; r <= d; ++r) {
      for (std::uint64_t k = 0; r + k <= d; ++k) {
        ASSERT_EQ(value_count_ratio(d, r, k) * Rational(binomial(d, r)),
                  Rational(binomial(d, r + k)));
      }
    }
  }
}

std::vector<std::vector<std::uint32_t>> positions_of(
    const std::vector<PositionVector>& all) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& pv : all) out.emplace_back(pv.positions().begin(), pv.positions().end());
  return out;
}

TEST(EnumerateTest, Examples) {
  using V = std::vector<std::vector<std::uint32_t>>;
  EXPECT_EQ(positions_of(enumerate_arrangements(3, 2)), (V{{1, 2}, {1, 3}, {2, 3}}));
  EXPECT_EQ(positions_of(enumerate_arrangements(4, 1)), (V{{1}, {2}, {3}, {4}}));
  EXPECT_EQ(enumerate_arrangements(10, 3).size(), 120u);
  EXPECT_THROW(enumerate_arrangements(40, 10), DataError);
  EXPECT_THROW(enumerate_arrangements(10, 3, EnumerationLimits{100}), DataError);
}

TEST(EnumerateTest, DistinctValueCounts) {
  for (std::uint32_t d = 1; d <= 10; ++d) {
    for (std::uint32_t r = 1; r <= std::min<std::uint32_t>(d, 4); ++r) {
      const auto all = enumerate_arrangements(d, r);
      std::set<Rational> rr;
      std::set<std::vector<std::uint32_t>> classes;
      for (const auto& pv : all) {
        rr.insert(reciprocal_rank(pv));
        classes.emplace(pv.positions().begin(), pv.positions().end());
      }
      EXPECT_EQ(rr.size(), d - r + 1);
      EXPECT_EQ(BigInt(classes.size()), binomial(d, r));
    }
  }
}

TEST(PsychRelevanceTest, Examples) {
  const PositionVector x({1, 3}, 2), y({1, 4}, 2);
  EXPECT_EQ(psych_relevance_preference(x, y), 1);
  EXPECT_EQ(psych_utility_profile(x),
            (std::vector<Rational>{1, 1, make_rational(1, 3)}));
  EXPECT_EQ(psych_relevance_preference(x, x), 0);
  EXPECT_THROW(psych_utility_profile(PositionVector({}, 21)), DataError);
}

// A user whose best relevant document is the i-th one exists in 2^{R-i}
// subsets, so utility 1/x_i appears exactly that often.
TEST(PsychRelevanceTest, TieMultiplicities) {
  const PositionVector x({2, 3, 7, 11}, 4);
  const auto profile = psych_utility_profile(x);
  ASSERT_EQ(profile.size(), 15u);
  for (std::uint32_t i = 1; i <= 4; ++i) {
    const auto count = std::count(profile.begin(), profile.end(),
                                  make_rational(1, *x.at_level(i)));
    EXPECT_EQ(count, 1 << (4 - i));
  }
  const PositionVector partial({5}, 3);
  const auto p = psych_utility_profile(partial);
  EXPECT_EQ(std::count(p.begin(), p.end(), make_rational(1, 5)), 4);
  EXPECT_EQ(std::count(p.begin(), p.end(), Rational(0)), 3);
}

TEST(RecallLevelTest, Examples) {
  EXPECT_EQ(recall_level_preference(PositionVector({2}, 1), PositionVector({3}, 1)), 1);
  EXPECT_EQ(recall_level_preference(PositionVector({}, 1), PositionVector({}, 1)), 0);
  EXPECT_THROW(recall_level_preference(PositionVector({}, 1), PositionVector({}, 2)),
               DataError);
}

TEST(BestCaseTest, AllThreeOrdersAgreeExhaustively) {
  for (std::uint32_t d = 1; d <= 10; ++d) {
    for (std::uint32_t r = 1; r <= std::min<std::uint32_t>(d, 4); ++r) {
      const auto all = enumerate_arrangements(d, r);
      for (const auto& x : all) {
        for (const auto& y : all) {
          const int s = sgn_lexiprecision(x, y);
          ASSERT_EQ(psych_relevance_preference(x, y), s);
          ASSERT_EQ(recall_level_preference(x, y), s);
        }
      }
    }
  }
}

TEST(BestCaseTest, AgreeWithUnretrievedLevels) {
  // Depth-truncated vectors: every retrieved prefix of each arrangement.
  std::vector<PositionVector> all;
  for (const auto& pv : enumerate_arrangements(7, 3)) {
    for (std::size_t keep = 0; keep <= 3; ++keep) {
      all.emplace_back(std::vector<std::uint32_t>(pv.positions().begin(),
                                                  pv.positions().begin() + keep),
                       3);
    }
  }
  for (const auto& x : all) {
    for (const auto& y : all) {
      const int s = sgn_lexiprecision(x, y);
      ASSERT_EQ(psych_relevance_preference(x, y), s);
      ASSERT_EQ(recall_level_preference(x, y), s);
    }
  }
}

}  // namespace
}  // namespace lexiprec::theory
