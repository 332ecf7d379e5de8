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

#ifndef LEXIPREC_THEORY_HPP_
#define LEXIPREC_THEORY_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lexiprec/error.hpp"
#include "lexiprec/metrics.hpp"
#include "lexiprec/model.hpp"
#include "lexiprec/rational.hpp"

namespace lexiprec::theory {

// Exact binomial coefficient; 0 when k > n.
inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

// Probability that a uniformly random arrangement of R relevant documents
// among D positions puts its first relevant document at r1, which is the
// probability that it ties on RR1 with a ranking whose first relevant
// document is at r1:  C(D - r1, R - 1) / C(D, R).
inline Rational tie_probability(std::uint64_t corpus, std::uint64_t relevant,
                                std::uint64_t r1) {
  if (relevant < 1 || relevant > corpus) {
    throw DataError("tie probability needs 1 <= R <= D");
  }
  if (r1 < 1 || r1 > corpus - relevant + 1) {
    throw DataError("r1 = " + std::to_string(r1) + " outside [1, " +
                    std::to_string(corpus - relevant + 1) + "]");
  }
  return Rational(binomial(corpus - r1, relevant - 1),
                  binomial(corpus, relevant));
}

// Growth in the number of distinct arrangements when k relevant documents
// are added: prod_{i=R+1}^{R+k} (D + 1 - i) / i, which equals
// C(D, R + k) / C(D, R).
inline Rational value_count_ratio(std::uint64_t corpus, std::uint64_t relevant,
                                  std::uint64_t k) {
  if (relevant + k > corpus) {
    throw DataError("value count ratio needs R + k <= D");
  }
  Rational ratio = 1;
  for (std::uint64_t i = relevant + 1; i <= relevant + k; ++i) {
    ratio *= Rational(BigInt(corpus + 1 - i), BigInt(i));
  }
  return ratio;
}

struct EnumerationLimits {
  std::uint64_t cap = 1'000'000;
};

// Visits every strictly increasing R-tuple over [1, D] in lexicographic
// order. No cap; callers bound the work.
template <typename Visitor>
void for_each_arrangement(std::uint32_t corpus, std::uint32_t relevant,
                          Visitor&& visit) {
  if (relevant > corpus) return;
  std::vector<std::uint32_t> a(relevant);
  for (std::uint32_t i = 0; i < relevant; ++i) a[i] = i + 1;
  while (true) {
    visit(std::span<const std::uint32_t>(a));
    if (relevant == 0) return;
    std::int64_t i = relevant - 1;
    while (i >= 0 && a[i] == corpus - relevant + i + 1) --i;
    if (i < 0) return;
    ++a[i];
    for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < relevant; ++j) {
      a[j] = a[j - 1] + 1;
    }
  }
}

// All C(D, R) arrangements as full-depth position vectors, lexicographic.
inline std::vector<PositionVector> enumerate_arrangements(
    std::uint32_t corpus, std::uint32_t relevant,
    const EnumerationLimits& limits = {}) {
  const BigInt count = binomial(corpus, relevant);
  if (count > limits.cap) {
    throw DataError("C(" + std::to_string(corpus) + ", " +
                    std::to_string(relevant) + ") = " + count.str() +
                    " arrangements exceeds the enumeration cap of " +
                    std::to_string(limits.cap));
  }
  std::vector<PositionVector> out;
  out.reserve(count.convert_to<std::size_t>());
  for_each_arrangement(corpus, relevant, [&](std::span<const std::uint32_t> a) {
    out.emplace_back(std::vector<std::uint32_t>(a.begin(), a.end()), relevant,
                     corpus);
  });
  return out;
}

namespace detail {

inline int compare_descending_profiles(std::span<const Rational> a,
                                       std::span<const Rational> b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] > b[i] ? +1 : -1;
  }
  return 0;
}

}  // namespace detail

inline constexpr std::uint32_t kMaxPsychRelevant = 20;

// Best-case utilities of the 2^R - 1 possible users under psychological
// relevance uncertainty: each non-empty subset S of the relevant documents
// is one user, whose utility is 1 / (best rank of a document in S), or 0
// when none of S was retrieved. Sorted descending.
inline std::vector<Rational> psych_utility_profile(const PositionVector& pv) {
  const std::uint32_t r = pv.total_relevant();
  if (r > kMaxPsychRelevant) {
    throw DataError("psychological-relevance enumeration supports R <= " +
                    std::to_string(kMaxPsychRelevant));
  }
  const auto pos = pv.positions();
  std::vector<Rational> utilities;
  utilities.reserve((std::size_t{1} << r) - 1);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << r); ++mask) {
    // Documents are indexed by rank order, so the best document of S is its
    // lowest set bit.
    std::uint32_t best = 0;
    while (!(mask & (std::uint64_t{1} << best))) ++best;
    utilities.push_back(best < pos.size() ? make_rational(1, pos[best])
                                          : Rational(0));
  }
  std::sort(utilities.begin(), utilities.end(), std::greater<>());
  return utilities;
}

// Lexicographic (leximax) comparison of the two populations of
// psychological-relevance users.
inline int psych_relevance_preference(const PositionVector& x,
                                      const PositionVector& y) {
  check_same_relevant(x, y);
  const auto ux = psych_utility_profile(x);
  const auto uy = psych_utility_profile(y);
  return detail::compare_descending_profiles(ux, uy);
}

// Lexicographic comparison of the recall-level utilities RR_1..RR_R, each
// side sorted descending before comparing.
inline int recall_level_preference(const PositionVector& x,
                                   const PositionVector& y) {
  check_same_relevant(x, y);
  auto ux = recall_level_utilities(x).rr;
  auto uy = recall_level_utilities(y).rr;
  std::sort(ux.begin(), ux.end(), std::greater<>());
  std::sort(uy.begin(), uy.end(), std::greater<>());
  return detail::compare_descending_profiles(ux, uy);
}

}  // namespace lexiprec::theory

#endif  // LEXIPREC_THEORY_HPP_
