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

#ifndef LEXIPREC_PREFERENCE_HPP_
#define LEXIPREC_PREFERENCE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lexiprec/error.hpp"
#include "lexiprec/metrics.hpp"
#include "lexiprec/model.hpp"
#include "lexiprec/rational.hpp"

namespace lexiprec {

// Lexicographic precision. Two rankings are compared at the first recall
// level where their reciprocal ranks differ; they tie only when every
// relevant document sits at the same position in both.

// Smallest level i in [1, R] with δRR_i(x, y) != 0. Once both vectors are
// exhausted every remaining level is 0 - 0, so the scan stops there.
inline std::optional<std::uint32_t> decisive_level(const PositionVector& x,
                                                   const PositionVector& y) {
  check_same_relevant(x, y);
  const auto px = x.positions();
  const auto py = y.positions();
  const std::size_t common = std::min(px.size(), py.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (px[i] != py[i]) return static_cast<std::uint32_t>(i + 1);
  }
  if (px.size() != py.size()) return static_cast<std::uint32_t>(common + 1);
  return std::nullopt;
}

// +1 if x wins at the decisive level, -1 if y does, 0 if no level decides.
inline int sgn_lexiprecision(const PositionVector& x, const PositionVector& y) {
  auto level = decisive_level(x, y);
  if (!level) return 0;
  auto a = x.at_level(*level);
  auto b = y.at_level(*level);
  if (!a) return -1;
  if (!b) return +1;
  return *a < *b ? +1 : -1;
}

inline Rational rr_lexiprecision(const PositionVector& x,
                                 const PositionVector& y) {
  auto level = decisive_level(x, y);
  if (!level) return Rational(0);
  return delta_rr(x, y, *level);
}

// Floating-point rrLP for statistics.
inline double rr_lexiprecision_value(const PositionVector& x,
                                     const PositionVector& y) {
  auto level = decisive_level(x, y);
  if (!level) return 0.0;
  return delta_rr_value(x, y, *level);
}

inline Preference lexi_compare(const PositionVector& x,
                               const PositionVector& y) {
  Preference pref;
  pref.istar = decisive_level(x, y);
  if (pref.istar) {
    pref.magnitude = delta_rr(x, y, *pref.istar);
    pref.sign = sign(pref.magnitude);
  }
  return pref;
}

enum class MagnitudeScheme { kRrLP, kSgnLP };

// Methods for turning a pair of rankings into a signed per-topic value.
enum class Method { kDeltaRR1, kRrLP, kSgnLP };

inline std::string_view to_string(MagnitudeScheme s) {
  return s == MagnitudeScheme::kRrLP ? "rrLP" : "sgnLP";
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kDeltaRR1:
      return "dRR1";
    case Method::kRrLP:
      return "rrLP";
    case Method::kSgnLP:
      return "sgnLP";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  if (name == "rr" || name == "RR" || name == "drr1" || name == "dRR1") {
    return Method::kDeltaRR1;
  }
  if (name == "rrlp" || name == "rrLP") return Method::kRrLP;
  if (name == "sgnlp" || name == "sgnLP") return Method::kSgnLP;
  throw DataError("unknown method '" + std::string(name) +
                  "' (expected rr, rrlp or sgnlp)");
}

// Exact per-topic value of a method.
inline Rational preference_value(Method method, const PositionVector& x,
                                 const PositionVector& y) {
  switch (method) {
    case Method::kDeltaRR1:
      check_same_relevant(x, y);
      return reciprocal_rank(x) - reciprocal_rank(y);
    case Method::kRrLP:
      return rr_lexiprecision(x, y);
    case Method::kSgnLP:
      return Rational(sgn_lexiprecision(x, y));
  }
  return Rational(0);
}

// Floating-point counterpart of preference_value.
inline double preference_double(Method method, const PositionVector& x,
                                const PositionVector& y) {
  switch (method) {
    case Method::kDeltaRR1:
      check_same_relevant(x, y);
      return delta_rr_value(x, y, 1);
    case Method::kRrLP:
      return rr_lexiprecision_value(x, y);
    case Method::kSgnLP:
      return sgn_lexiprecision(x, y);
  }
  return 0.0;
}

// Mean over topics of the chosen magnitude.
inline Rational aggregate_preference(std::span<const Preference> per_topic,
                                     MagnitudeScheme scheme) {
  if (per_topic.empty()) {
    throw DataError("cannot aggregate preferences over an empty topic set");
  }
  Rational sum = 0;
  for (const auto& p : per_topic) {
    sum += scheme == MagnitudeScheme::kRrLP ? p.magnitude : Rational(p.sign);
  }
  return sum / static_cast<long long>(per_topic.size());
}

}  // namespace lexiprec

#endif  // LEXIPREC_PREFERENCE_HPP_
