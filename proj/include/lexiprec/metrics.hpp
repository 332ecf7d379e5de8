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

#ifndef LEXIPREC_METRICS_HPP_
#define LEXIPREC_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lexiprec/error.hpp"
#include "lexiprec/model.hpp"
#include "lexiprec/rational.hpp"

namespace lexiprec {

// 1 / position of the first retrieved relevant document; 0 if none.
inline Rational reciprocal_rank(const PositionVector& pv) {
  if (pv.retrieved() == 0) return Rational(0);
  return make_rational(1, pv.positions()[0]);
}

// Type 1 expected search length: rank of the first relevant document, or
// nullopt (not found) when none was retrieved.
inline std::optional<std::uint32_t> esl1(const PositionVector& pv) {
  if (pv.retrieved() == 0) return std::nullopt;
  return pv.positions()[0];
}

inline void check_level(const PositionVector& pv, std::size_t level) {
  if (level < 1 || level > pv.total_relevant()) {
    throw DataError("recall level " + std::to_string(level) +
                    " outside [1, " + std::to_string(pv.total_relevant()) + "]");
  }
}

// Reciprocal rank of the level-th relevant document; 0 when that level was
// not retrieved.
inline Rational rr_at_level(const PositionVector& pv, std::size_t level) {
  check_level(pv, level);
  auto p = pv.at_level(level);
  return p ? make_rational(1, *p) : Rational(0);
}

inline void check_same_relevant(const PositionVector& x,
                                const PositionVector& y) {
  if (x.total_relevant() != y.total_relevant()) {
    throw DataError("position vectors have different relevant counts (" +
                    std::to_string(x.total_relevant()) + " vs " +
                    std::to_string(y.total_relevant()) + ")");
  }
}

inline Rational delta_rr(const PositionVector& x, const PositionVector& y,
                         std::size_t level) {
  check_same_relevant(x, y);
  return rr_at_level(x, level) - rr_at_level(y, level);
}

// rr[1..R]. Non-increasing because positions are strictly increasing.
struct RecallLevelUtilities {
  std::vector<Rational> rr;
};

inline RecallLevelUtilities recall_level_utilities(const PositionVector& pv) {
  RecallLevelUtilities out;
  out.rr.reserve(pv.total_relevant());
  for (std::size_t i = 1; i <= pv.total_relevant(); ++i) {
    out.rr.push_back(rr_at_level(pv, i));
  }
  return out;
}

// Floating-point δRR at a level, for statistics that do not need exactness.
// Levels past R read as zero utility on both sides.
inline double delta_rr_value(const PositionVector& x, const PositionVector& y,
                             std::size_t level) {
  auto px = x.at_level(level);
  auto py = y.at_level(level);
  const double ux = px ? 1.0 / *px : 0.0;
  const double uy = py ? 1.0 / *py : 0.0;
  return ux - uy;
}

}  // namespace lexiprec

#endif  // LEXIPREC_METRICS_HPP_
