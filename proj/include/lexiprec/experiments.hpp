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

#ifndef LEXIPREC_EXPERIMENTS_HPP_
#define LEXIPREC_EXPERIMENTS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lexiprec/error.hpp"
#include "lexiprec/metrics.hpp"
#include "lexiprec/model.hpp"
#include "lexiprec/parallel.hpp"
#include "lexiprec/preference.hpp"
#include "lexiprec/prng.hpp"
#include "lexiprec/rational.hpp"
#include "lexiprec/stats.hpp"

namespace lexiprec::experiments {

// ---------------------------------------------------------------------------
// Label and topic degradation

// floor(fraction * n); the 1e-9 nudge keeps products such as 0.29 * 100
// from rounding down to 28.
inline std::size_t removal_count(double fraction, std::size_t n) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw DataError("removal fraction must lie in [0, 1)");
  }
  return static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(n) + 1e-9));
}

namespace detail {

// Marks m of n slots starting at `offset` by a partial Fisher-Yates shuffle
// of [0, n) driven by `rng`.
inline void mark_random_subset(std::vector<bool>& removed, std::size_t offset,
                               std::size_t n, std::size_t m, Prng rng) {
  std::vector<std::size_t> index(n);
  for (std::size_t i = 0; i < n; ++i) index[i] = i;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(n - i));
    std::swap(index[i], index[j]);
    removed[offset + index[i]] = true;
  }
}

}  // namespace detail

// Chooses which relevant labels to drop. Labels are laid out topic by topic
// (judgments topic order, documents in identifier order within a topic);
// `labels_per_topic` gives the block sizes. Globally, floor(fraction * total)
// labels are drawn uniformly without replacement with Prng(seed). Stratified,
// topic t loses floor(fraction * n_t) labels drawn with
// Prng(seed).substream(t).
inline std::vector<bool> select_removed_labels(
    std::span<const std::size_t> labels_per_topic, double fraction,
    std::uint64_t seed, bool stratified = false) {
  std::size_t total = 0;
  for (std::size_t n : labels_per_topic) total += n;
  std::vector<bool> removed(total, false);
  if (!stratified) {
    detail::mark_random_subset(removed, 0, total, removal_count(fraction, total),
                               Prng(seed));
    return removed;
  }
  std::size_t offset = 0;
  const Prng root(seed);
  for (std::size_t t = 0; t < labels_per_topic.size(); ++t) {
    const std::size_t n = labels_per_topic[t];
    detail::mark_random_subset(removed, offset, n, removal_count(fraction, n),
                               root.substream(t));
    offset += n;
  }
  return removed;
}

inline std::vector<std::size_t> relevant_label_counts(const Judgments& judgments) {
  std::vector<std::size_t> counts;
  counts.reserve(judgments.topics().size());
  for (const auto& topic : judgments.topics()) {
    counts.push_back(judgments.num_relevant(topic));
  }
  return counts;
}

// Removes a random fraction of the relevant labels; removed documents become
// unjudged and therefore non-relevant. Topics keep their entry even when all
// their labels are gone.
inline Judgments degrade_labels(const Judgments& judgments, double fraction,
                                std::uint64_t seed, bool stratified = false) {
  const auto counts = relevant_label_counts(judgments);
  const auto removed = select_removed_labels(counts, fraction, seed, stratified);
  GradeTable grades = judgments.grades();
  std::size_t label = 0;
  const int threshold = judgments.binarization_threshold();
  for (auto& [topic, docs] : grades) {
    for (auto it = docs.begin(); it != docs.end();) {
      if (it->second >= threshold) {
        if (removed[label++]) {
          it = docs.erase(it);
          continue;
        }
      }
      ++it;
    }
  }
  return Judgments(std::move(grades), threshold);
}

// Drops floor(fraction * |topics|) topics chosen uniformly with Prng(seed);
// the survivors keep their input order.
inline std::vector<TopicId> degrade_queries(std::span<const TopicId> topics,
                                            double fraction, std::uint64_t seed) {
  const std::size_t m = removal_count(fraction, topics.size());
  if (m >= topics.size()) throw DataError("query removal leaves no topics");
  std::vector<bool> removed(topics.size(), false);
  detail::mark_random_subset(removed, 0, topics.size(), m, Prng(seed));
  std::vector<TopicId> kept;
  kept.reserve(topics.size() - m);
  for (std::size_t i = 0; i < topics.size(); ++i) {
    if (!removed[i]) kept.push_back(topics[i]);
  }
  return kept;
}

// ---------------------------------------------------------------------------
// Collection: position vectors for every (run, topic)

// Topics with at least one relevant document.
inline std::vector<TopicId> evaluable_topics(const Judgments& judgments) {
  std::vector<TopicId> topics;
  for (const auto& topic : judgments.topics()) {
    if (judgments.num_relevant(topic) > 0) topics.push_back(topic);
  }
  return topics;
}

// Runs are sorted by tag and topics lexicographically, so run pairs (a < b)
// come out ordered by tag. Each (run, topic) also remembers which relevant
// label sits at each position, so label removal is a filter rather than a
// re-scan of the rankings.
class Collection {
 public:
  struct Hit {
    std::uint32_t position;
    std::uint32_t label;  // global relevant-label index
  };

  Collection(std::span<const RunRanking> runs, const Judgments& judgments,
             std::span<const TopicId> topics, unsigned threads = 1) {
    std::vector<const RunRanking*> sorted;
    for (const auto& run : runs) sorted.push_back(&run);
    std::sort(sorted.begin(), sorted.end(),
              [](auto* a, auto* b) { return a->tag() < b->tag(); });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      if (sorted[i]->tag() == sorted[i + 1]->tag()) {
        throw DataError("duplicate run tag " + sorted[i]->tag());
      }
    }
    for (auto* run : sorted) tags_.push_back(run->tag());
    topics_.assign(topics.begin(), topics.end());
    std::sort(topics_.begin(), topics_.end());
    topics_.erase(std::unique(topics_.begin(), topics_.end()), topics_.end());

    // Global label layout matches select_removed_labels/degrade_labels.
    std::map<TopicId, std::size_t> base;
    std::size_t next = 0;
    for (const auto& topic : judgments.topics()) {
      base[topic] = next;
      label_blocks_.push_back(judgments.num_relevant(topic));
      next += label_blocks_.back();
    }
    label_count_ = next;

    const int threshold = judgments.binarization_threshold();
    std::vector<std::unordered_map<std::string_view, std::uint32_t>> label_of(
        topics_.size());
    for (std::size_t t = 0; t < topics_.size(); ++t) {
      const auto& topic = topics_[t];
      if (!judgments.has_topic(topic)) {
        throw DataError("topic has no judgments: " + topic);
      }
      auto id = static_cast<std::uint32_t>(base.at(topic));
      for (const auto& [doc, grade] : judgments.grades().at(topic)) {
        if (grade >= threshold) label_of[t].emplace(doc, id++);
      }
      relevant_.push_back(static_cast<std::uint32_t>(label_of[t].size()));
      label_base_.push_back(static_cast<std::uint32_t>(base.at(topic)));
    }

    hits_.assign(sorted.size(), std::vector<std::vector<Hit>>(topics_.size()));
    parallel_for(sorted.size(), threads, [&](std::size_t r) {
      for (std::size_t t = 0; t < topics_.size(); ++t) {
        const auto& docs = sorted[r]->ranking(topics_[t]);
        auto& out = hits_[r][t];
        for (std::size_t rank = 0; rank < docs.size(); ++rank) {
          auto it = label_of[t].find(docs[rank]);
          if (it != label_of[t].end()) {
            out.push_back({static_cast<std::uint32_t>(rank + 1), it->second});
            if (out.size() == relevant_[t]) break;
          }
        }
      }
    });
    rebuild_vectors();
  }

  std::size_t runs() const noexcept { return tags_.size(); }
  std::size_t topic_count() const noexcept { return topics_.size(); }
  const std::vector<std::string>& run_tags() const noexcept { return tags_; }
  const std::vector<TopicId>& topics() const noexcept { return topics_; }
  std::size_t label_count() const noexcept { return label_count_; }
  // Relevant labels per judged topic, in the layout used by label masks.
  const std::vector<std::size_t>& label_blocks() const noexcept { return label_blocks_; }
  std::uint32_t relevant(std::size_t topic) const { return relevant_.at(topic); }

  const PositionVector& at(std::size_t run, std::size_t topic) const {
    return vectors_.at(run).at(topic);
  }

  // The collection as evaluated after dropping the marked labels.
  Collection with_removed_labels(const std::vector<bool>& removed) const {
    if (removed.size() != label_count_) {
      throw DataError("label mask size does not match the collection");
    }
    if (labels_removed_) throw DataError("labels were already removed");
    Collection out = *this;
    out.labels_removed_ = true;
    for (std::size_t t = 0; t < topics_.size(); ++t) {
      std::uint32_t lost = 0;
      for (std::uint32_t l = label_base_[t]; l < label_base_[t] + relevant_[t]; ++l) {
        lost += removed[l] ? 1 : 0;
      }
      out.relevant_[t] = relevant_[t] - lost;
    }
    for (auto& per_run : out.hits_) {
      for (auto& hits : per_run) {
        std::erase_if(hits, [&](const Hit& h) { return removed[h.label]; });
      }
    }
    out.rebuild_vectors();
    return out;
  }

  // The collection restricted to a subset of its topics.
  Collection with_topics(std::span<const TopicId> keep) const {
    Collection out = *this;
    std::vector<std::size_t> index;
    for (const auto& topic : keep) {
      auto it = std::lower_bound(topics_.begin(), topics_.end(), topic);
      if (it == topics_.end() || *it != topic) {
        throw DataError("topic not in collection: " + topic);
      }
      index.push_back(static_cast<std::size_t>(it - topics_.begin()));
    }
    std::sort(index.begin(), index.end());
    index.erase(std::unique(index.begin(), index.end()), index.end());
    out.topics_.clear();
    out.relevant_.clear();
    out.label_base_.clear();
    for (std::size_t i : index) {
      out.topics_.push_back(topics_[i]);
      out.relevant_.push_back(relevant_[i]);
      out.label_base_.push_back(label_base_[i]);
    }
    for (std::size_t r = 0; r < runs(); ++r) {
      out.hits_[r].clear();
      for (std::size_t i : index) out.hits_[r].push_back(hits_[r][i]);
    }
    out.rebuild_vectors();
    return out;
  }

 private:
  void rebuild_vectors() {
    vectors_.assign(tags_.size(), std::vector<PositionVector>(topics_.size()));
    for (std::size_t r = 0; r < tags_.size(); ++r) {
      for (std::size_t t = 0; t < topics_.size(); ++t) {
        std::vector<PositionVector::Position> positions;
        positions.reserve(hits_[r][t].size());
        for (const Hit& h : hits_[r][t]) positions.push_back(h.position);
        vectors_[r][t] = PositionVector(std::move(positions), relevant_[t]);
      }
    }
  }

  std::vector<std::string> tags_;
  std::vector<TopicId> topics_;
  std::vector<std::uint32_t> relevant_;
  std::vector<std::uint32_t> label_base_;
  bool labels_removed_ = false;
  std::size_t label_count_ = 0;
  std::vector<std::size_t> label_blocks_;
  std::vector<std::vector<std::vector<Hit>>> hits_;
  std::vector<std::vector<PositionVector>> vectors_;
};

struct RunPair {
  std::size_t a = 0;
  std::size_t b = 0;
};

// Unordered pairs (a, b), a < b, in lexicographic order.
inline std::vector<RunPair> run_pairs(std::size_t runs) {
  std::vector<RunPair> pairs;
  if (runs >= 2) pairs.reserve(runs * (runs - 1) / 2);
  for (std::size_t a = 0; a < runs; ++a) {
    for (std::size_t b = a + 1; b < runs; ++b) pairs.push_back({a, b});
  }
  return pairs;
}

inline void require_pairs(const Collection& c) {
  if (c.runs() < 2) throw DataError("at least 2 runs are required");
  if (c.topic_count() == 0) throw DataError("no topics with relevant documents");
}

// ---------------------------------------------------------------------------
// Configuration

struct ExperimentConfig {
  Method scheme = Method::kRrLP;
  std::vector<double> fractions = {0.0, 0.1, 0.2, 0.3, 0.4,
                                   0.5, 0.6, 0.7, 0.8, 0.9};
  std::size_t n_samples = 10;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  int binarization_threshold = 1;
  bool stratified_labels = false;

  void validate() const {
    if (fractions.empty()) throw DataError("at least one removal fraction is required");
    for (double f : fractions) {
      if (!(f >= 0.0 && f < 1.0)) throw DataError("removal fractions must lie in [0, 1)");
    }
    if (n_samples < 1) throw DataError("samples must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must lie in (0, 1)");
    if (binarization_threshold < 1) throw DataError("binarization threshold must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// Tie census

struct TieCensus {
  struct ByFirstPosition {
    std::uint32_t r1 = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t ties = 0;
    double p_tie = 0.0;
  };
  struct ByLevel {
    std::uint32_t level = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t ties = 0;
    double p_tie = 0.0;
  };

  std::size_t runs = 0;
  std::size_t topics = 0;
  std::uint64_t comparisons = 0;  // unordered run pairs x topics
  std::uint64_t rr1_ties = 0;
  std::uint64_t lexi_ties = 0;
  double rr1_tie_pct = 0.0;
  double lexi_tie_pct = 0.0;
  // Empirical P(δRR1 = 0 | first relevant position of x = r1), over both
  // orientations of every pair; x without a retrieved relevant document is
  // not counted.
  std::vector<ByFirstPosition> by_first_position;
  // P(δRR_i = 0) over (pair, topic) with R >= i.
  std::vector<ByLevel> by_level;
};

inline TieCensus tie_census(const Collection& c, std::size_t max_level = 20,
                            unsigned threads = 0) {
  require_pairs(c);
  const auto pairs = run_pairs(c.runs());
  struct Local {
    std::uint64_t rr1 = 0, lexi = 0;
    std::map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> first;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> level;
  };
  std::vector<Local> local(c.topic_count());
  parallel_for(c.topic_count(), threads, [&](std::size_t t) {
    Local& acc = local[t];
    const std::size_t levels = std::min<std::size_t>(max_level, c.relevant(t));
    acc.level.assign(levels, {0, 0});
    for (const auto& [a, b] : pairs) {
      const auto& x = c.at(a, t);
      const auto& y = c.at(b, t);
      const bool rr1_tie = x.at_level(1) == y.at_level(1);
      acc.rr1 += rr1_tie;
      acc.lexi += x == y;
      for (const auto* v : {&x, &y}) {
        if (auto r1 = v->at_level(1)) {
          auto& cell = acc.first[*r1];
          ++cell.first;
          cell.second += rr1_tie;
        }
      }
      for (std::size_t i = 1; i <= levels; ++i) {
        ++acc.level[i - 1].first;
        acc.level[i - 1].second += x.at_level(i) == y.at_level(i);
      }
    }
  });

  TieCensus out;
  out.runs = c.runs();
  out.topics = c.topic_count();
  out.comparisons = static_cast<std::uint64_t>(pairs.size()) * c.topic_count();
  std::map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> first;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> level(max_level, {0, 0});
  for (const Local& acc : local) {
    out.rr1_ties += acc.rr1;
    out.lexi_ties += acc.lexi;
    for (const auto& [r1, cell] : acc.first) {
      first[r1].first += cell.first;
      first[r1].second += cell.second;
    }
    for (std::size_t i = 0; i < acc.level.size(); ++i) {
      level[i].first += acc.level[i].first;
      level[i].second += acc.level[i].second;
    }
  }
  const double total = static_cast<double>(out.comparisons);
  out.rr1_tie_pct = 100.0 * static_cast<double>(out.rr1_ties) / total;
  out.lexi_tie_pct = 100.0 * static_cast<double>(out.lexi_ties) / total;
  for (const auto& [r1, cell] : first) {
    out.by_first_position.push_back(
        {r1, cell.first, cell.second,
         static_cast<double>(cell.second) / static_cast<double>(cell.first)});
  }
  for (std::size_t i = 0; i < level.size(); ++i) {
    if (level[i].first == 0) continue;
    out.by_level.push_back({static_cast<std::uint32_t>(i + 1), level[i].first,
                            level[i].second,
                            static_cast<double>(level[i].second) /
                                static_cast<double>(level[i].first)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decisive-level ECDF

struct IstarEcdf {
  struct Row {
    std::uint32_t level = 0;
    std::uint64_t count = 0;
    double cumulative = 0.0;
  };
  std::uint64_t decided = 0;
  std::uint64_t undecided = 0;
  std::vector<Row> rows;  // every level from 1 to the largest observed
};

inline IstarEcdf ecdf_from_counts(const std::map<std::uint32_t, std::uint64_t>& counts,
                                  std::uint64_t undecided = 0) {
  IstarEcdf out;
  out.undecided = undecided;
  for (const auto& [level, n] : counts) out.decided += n;
  if (counts.empty()) return out;
  const std::uint32_t last = counts.rbegin()->first;
  std::uint64_t running = 0;
  for (std::uint32_t level = 1; level <= last; ++level) {
    auto it = counts.find(level);
    const std::uint64_t n = it == counts.end() ? 0 : it->second;
    running += n;
    out.rows.push_back({level, n,
                        static_cast<double>(running) /
                            static_cast<double>(out.decided)});
  }
  return out;
}

inline IstarEcdf ecdf_from_levels(std::span<const std::uint32_t> levels) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (std::uint32_t level : levels) {
    if (level < 1) throw DataError("decisive levels start at 1");
    ++counts[level];
  }
  return ecdf_from_counts(counts);
}

inline IstarEcdf istar_ecdf(const Collection& c, unsigned threads = 0) {
  require_pairs(c);
  const auto pairs = run_pairs(c.runs());
  std::vector<std::map<std::uint32_t, std::uint64_t>> local(c.topic_count());
  std::vector<std::uint64_t> undecided(c.topic_count(), 0);
  parallel_for(c.topic_count(), threads, [&](std::size_t t) {
    for (const auto& [a, b] : pairs) {
      if (auto level = decisive_level(c.at(a, t), c.at(b, t))) {
        ++local[t][*level];
      } else {
        ++undecided[t];
      }
    }
  });
  std::map<std::uint32_t, std::uint64_t> counts;
  std::uint64_t none = 0;
  for (std::size_t t = 0; t < local.size(); ++t) {
    for (const auto& [level, n] : local[t]) counts[level] += n;
    none += undecided[t];
  }
  return ecdf_from_counts(counts, none);
}

// ---------------------------------------------------------------------------
// Agreement with a masked first recall level

struct MaskedPrediction {
  int target = 0;        // sgn δRR1 on the full vectors
  int sgnlp_suffix = 0;  // sgnLP on levels 2..R
  int drr2 = 0;          // sgn δRR of the suffix's first level, i.e. δRR2
};

inline MaskedPrediction masked_prediction(const PositionVector& x,
                                          const PositionVector& y) {
  check_same_relevant(x, y);
  MaskedPrediction out;
  out.target = sign(reciprocal_rank(x) - reciprocal_rank(y));
  if (x.total_relevant() == 0) return out;
  const auto sx = x.suffix();
  const auto sy = y.suffix();
  out.sgnlp_suffix = sgn_lexiprecision(sx, sy);
  out.drr2 = sx.total_relevant() == 0 ? 0 : sign(delta_rr(sx, sy, 1));
  return out;
}

struct MaskedPrefixAgreement {
  std::uint64_t qualifying = 0;
  std::uint64_t sgnlp_agree = 0;
  std::uint64_t drr2_agree = 0;
  double sgnlp_pct = 0.0;
  double drr2_pct = 0.0;
};

// Over (pair, topic) with δRR1 != 0, how often each suffix predictor matches
// sgn δRR1. A predictor that returns 0 counts as a disagreement.
inline MaskedPrefixAgreement masked_prefix_agreement(const Collection& c,
                                                     unsigned threads = 0) {
  require_pairs(c);
  const auto pairs = run_pairs(c.runs());
  std::vector<MaskedPrefixAgreement> local(c.topic_count());
  parallel_for(c.topic_count(), threads, [&](std::size_t t) {
    auto& acc = local[t];
    for (const auto& [a, b] : pairs) {
      const auto& x = c.at(a, t);
      const auto& y = c.at(b, t);
      if (x.at_level(1) == y.at_level(1)) continue;
      const auto p = masked_prediction(x, y);
      ++acc.qualifying;
      acc.sgnlp_agree += p.sgnlp_suffix == p.target;
      acc.drr2_agree += p.drr2 == p.target;
    }
  });
  MaskedPrefixAgreement out;
  for (const auto& acc : local) {
    out.qualifying += acc.qualifying;
    out.sgnlp_agree += acc.sgnlp_agree;
    out.drr2_agree += acc.drr2_agree;
  }
  if (out.qualifying == 0) {
    throw DataError("no (pair, topic) with a nonzero reciprocal-rank difference");
  }
  const double q = static_cast<double>(out.qualifying);
  out.sgnlp_pct = 100.0 * static_cast<double>(out.sgnlp_agree) / q;
  out.drr2_pct = 100.0 * static_cast<double>(out.drr2_agree) / q;
  return out;
}

// ---------------------------------------------------------------------------
// Agreement under degraded labels or queries

enum class Degradation { kLabels, kQueries };

inline std::string_view to_string(Degradation d) {
  return d == Degradation::kLabels ? "labels" : "queries";
}

// Sign of the mean of a method over the collection's topics for runs a, b.
// The floating-point sum decides unless it is within rounding distance of
// zero, in which case the exact rational sum does.
inline int mean_preference_sign(const Collection& c, Method method,
                                std::size_t a, std::size_t b) {
  double sum = 0.0;
  double magnitude = 0.0;
  for (std::size_t t = 0; t < c.topic_count(); ++t) {
    const double v = preference_double(method, c.at(a, t), c.at(b, t));
    sum += v;
    magnitude += std::fabs(v);
  }
  if (std::fabs(sum) > 1e-9 * magnitude) return sum > 0.0 ? 1 : -1;
  Rational exact = 0;
  for (std::size_t t = 0; t < c.topic_count(); ++t) {
    exact += preference_value(method, c.at(a, t), c.at(b, t));
  }
  return sign(exact);
}

struct AgreementPoint {
  Degradation mode = Degradation::kLabels;
  double fraction = 0.0;
  Method method = Method::kDeltaRR1;
  std::size_t samples = 0;
  double ranking_mean = 0.0;  // percent
  double ranking_sd = 0.0;
  double system_mean = 0.0;   // percent
  double system_sd = 0.0;
  double tie_mean = 0.0;      // percent of (pair, topic) tied
  double tie_sd = 0.0;
};

struct AgreementCurves {
  std::uint64_t decided_rankings = 0;  // full-data (pair, topic) with δRR1 != 0
  std::uint64_t decided_systems = 0;   // pairs whose full-data mean δRR1 != 0
  std::vector<AgreementPoint> points;  // mode, fraction, method order
};

inline constexpr Method kAllMethods[] = {Method::kDeltaRR1, Method::kRrLP,
                                         Method::kSgnLP};

// Ranking agreement: over full-data (pair, topic) with δRR1 != 0, the share
// where the method on degraded data has the same sign. System agreement:
// over pairs whose full-data mean δRR1 is nonzero, the share where the
// degraded mean of the method has the same sign. Sample s of fraction index
// f in a mode draws its randomness from
// Prng(seed).substream(mode).substream(f).substream(s).
inline AgreementCurves agreement_under_degradation(
    const Collection& full, const ExperimentConfig& config,
    std::span<const Degradation> modes, unsigned threads = 0) {
  config.validate();
  require_pairs(full);
  const auto pairs = run_pairs(full.runs());
  const std::size_t n_topics = full.topic_count();

  // Full-data reference signs.
  std::vector<std::vector<int>> ref_rank(pairs.size(), std::vector<int>(n_topics));
  std::vector<int> ref_system(pairs.size());
  AgreementCurves out;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t t = 0; t < n_topics; ++t) {
      const auto& x = full.at(pairs[p].a, t);
      const auto& y = full.at(pairs[p].b, t);
      ref_rank[p][t] = sign(reciprocal_rank(x) - reciprocal_rank(y));
      out.decided_rankings += ref_rank[p][t] != 0;
    }
    ref_system[p] = mean_preference_sign(full, Method::kDeltaRR1, pairs[p].a,
                                         pairs[p].b);
    out.decided_systems += ref_system[p] != 0;
  }

  struct Sample {
    double ranking[3] = {0, 0, 0};
    double system[3] = {0, 0, 0};
    double ties[3] = {0, 0, 0};
  };
  const Prng root(config.seed);
  const std::size_t label_total = full.label_count();

  for (Degradation mode : modes) {
    const std::size_t n_fractions = config.fractions.size();
    std::vector<Sample> samples(n_fractions * config.n_samples);
    parallel_for(samples.size(), threads, [&](std::size_t item) {
      const std::size_t f = item / config.n_samples;
      const std::size_t s = item % config.n_samples;
      const double fraction = config.fractions[f];
      const std::uint64_t key = root.substream(static_cast<std::uint64_t>(mode))
                                    .substream(f)
                                    .substream(s)
                                    .key();
      std::optional<Collection> degraded;
      std::vector<bool> topic_kept(n_topics, true);
      if (mode == Degradation::kLabels) {
        std::vector<bool> removed;
        if (config.stratified_labels) {
          removed = select_removed_labels(full.label_blocks(), fraction, key, true);
        } else {
          const std::size_t sizes[] = {label_total};
          removed = select_removed_labels(sizes, fraction, key, false);
        }
        degraded.emplace(full.with_removed_labels(removed));
      } else {
        const auto kept = degrade_queries(full.topics(), fraction, key);
        std::size_t j = 0;
        for (std::size_t t = 0; t < n_topics; ++t) {
          const bool keep = j < kept.size() && kept[j] == full.topics()[t];
          topic_kept[t] = keep;
          j += keep;
        }
        degraded.emplace(full.with_topics(kept));
      }

      Sample& out_sample = samples[item];
      for (std::size_t m = 0; m < 3; ++m) {
        const Method method = kAllMethods[m];
        std::uint64_t agree = 0, considered = 0, ties = 0, comparisons = 0;
        std::uint64_t sys_agree = 0, sys_considered = 0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
          std::size_t dt = 0;  // topic index within the degraded collection
          for (std::size_t t = 0; t < n_topics; ++t) {
            if (!topic_kept[t]) continue;
            const auto& x = degraded->at(pairs[p].a, dt);
            const auto& y = degraded->at(pairs[p].b, dt);
            ++dt;
            const int v = method == Method::kDeltaRR1
                              ? sign(reciprocal_rank(x) - reciprocal_rank(y))
                              : sgn_lexiprecision(x, y);
            ++comparisons;
            ties += v == 0;
            if (ref_rank[p][t] != 0) {
              ++considered;
              agree += v == ref_rank[p][t];
            }
          }
          if (ref_system[p] != 0) {
            ++sys_considered;
            sys_agree += mean_preference_sign(*degraded, method, pairs[p].a,
                                              pairs[p].b) == ref_system[p];
          }
        }
        auto pct = [](std::uint64_t num, std::uint64_t den) {
          return den == 0 ? 0.0
                          : 100.0 * static_cast<double>(num) /
                                static_cast<double>(den);
        };
        out_sample.ranking[m] = pct(agree, considered);
        out_sample.system[m] = pct(sys_agree, sys_considered);
        out_sample.ties[m] = pct(ties, comparisons);
      }
    });

    for (std::size_t f = 0; f < n_fractions; ++f) {
      for (std::size_t m = 0; m < 3; ++m) {
        std::vector<double> rank, sys, tie;
        for (std::size_t s = 0; s < config.n_samples; ++s) {
          const Sample& sample = samples[f * config.n_samples + s];
          rank.push_back(sample.ranking[m]);
          sys.push_back(sample.system[m]);
          tie.push_back(sample.ties[m]);
        }
        AgreementPoint point;
        point.mode = mode;
        point.fraction = config.fractions[f];
        point.method = kAllMethods[m];
        point.samples = config.n_samples;
        point.ranking_mean = stats::mean(rank);
        point.ranking_sd = stats::sample_sd(rank);
        point.system_mean = stats::mean(sys);
        point.system_sd = stats::sample_sd(sys);
        point.tie_mean = stats::mean(tie);
        point.tie_sd = stats::sample_sd(tie);
        out.points.push_back(point);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Backoff locality

struct BackoffConfig {
  std::size_t max_level = 8;
  std::size_t horizon = 4;
  std::size_t targets = 4;  // regress δRR_i for i = 1..targets
};

struct BackoffRegression {
  std::size_t target_level = 0;
  std::vector<std::size_t> predictor_levels;
  // Intercept first, then one coefficient per predictor level; nullopt when
  // the design is rank deficient or too small.
  std::optional<std::vector<double>> coefficients;
};

struct BackoffResult {
  std::size_t observations = 0;
  std::size_t max_level = 0;
  // correlation[i][j] between δRR_{i+1} and δRR_{j+1}; nullopt when a column
  // is constant.
  std::vector<std::vector<std::optional<double>>> correlation;
  std::vector<BackoffRegression> regressions;
};

// Rows are observations, column i holds δRR_{i+1}.
inline BackoffResult backoff_from_deltas(const Eigen::MatrixXd& deltas,
                                         const BackoffConfig& cfg) {
  if (cfg.max_level < 2) throw DataError("backoff needs max level >= 2");
  if (cfg.horizon < 1) throw DataError("backoff needs horizon >= 1");
  if (static_cast<std::size_t>(deltas.cols()) != cfg.max_level) {
    throw DataError("delta matrix must have one column per level");
  }
  BackoffResult out;
  out.observations = static_cast<std::size_t>(deltas.rows());
  out.max_level = cfg.max_level;
  const std::size_t L = cfg.max_level;
  out.correlation.assign(L, std::vector<std::optional<double>>(L));
  std::vector<std::vector<double>> columns(L);
  for (std::size_t i = 0; i < L; ++i) {
    columns[i].assign(deltas.col(static_cast<Eigen::Index>(i)).data(),
                      deltas.col(static_cast<Eigen::Index>(i)).data() + deltas.rows());
  }
  if (out.observations >= 2) {
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = 0; j < L; ++j) {
        out.correlation[i][j] = stats::pearson(columns[i], columns[j]);
      }
    }
  }
  for (std::size_t target = 1; target <= cfg.targets; ++target) {
    if (target + cfg.horizon > L) break;
    BackoffRegression reg;
    reg.target_level = target;
    for (std::size_t j = target + 1; j <= target + cfg.horizon; ++j) {
      reg.predictor_levels.push_back(j);
    }
    const auto n = deltas.rows();
    const auto p = static_cast<Eigen::Index>(cfg.horizon + 1);
    if (n > p) {
      Eigen::MatrixXd X(n, p);
      X.col(0).setOnes();
      for (std::size_t j = 0; j < cfg.horizon; ++j) {
        X.col(static_cast<Eigen::Index>(j + 1)) =
            deltas.col(static_cast<Eigen::Index>(target + j));
      }
      try {
        const Eigen::VectorXd beta =
            stats::ols(X, deltas.col(static_cast<Eigen::Index>(target - 1)));
        reg.coefficients = std::vector<double>(beta.data(), beta.data() + beta.size());
      } catch (const DataError&) {
        reg.coefficients.reset();
      }
    }
    out.regressions.push_back(std::move(reg));
  }
  return out;
}

// δRR_1..δRR_L over every unordered run pair and topic (levels beyond a
// topic's R are 0 - 0), then correlations and regressions.
inline BackoffResult backoff_analysis(const Collection& c,
                                      const BackoffConfig& cfg = {},
                                      unsigned threads = 0) {
  require_pairs(c);
  if (cfg.max_level < 2) throw DataError("backoff needs max level >= 2");
  const auto pairs = run_pairs(c.runs());
  const std::size_t n_topics = c.topic_count();
  Eigen::MatrixXd deltas(static_cast<Eigen::Index>(pairs.size() * n_topics),
                         static_cast<Eigen::Index>(cfg.max_level));
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    for (std::size_t t = 0; t < n_topics; ++t) {
      const auto row = static_cast<Eigen::Index>(p * n_topics + t);
      for (std::size_t i = 1; i <= cfg.max_level; ++i) {
        deltas(row, static_cast<Eigen::Index>(i - 1)) =
            delta_rr_value(c.at(pairs[p].a, t), c.at(pairs[p].b, t), i);
      }
    }
  });
  return backoff_from_deltas(deltas, cfg);
}

// ---------------------------------------------------------------------------
// Discriminative power

enum class SignificanceTest { kHsd, kPaired };

inline std::string_view to_string(SignificanceTest t) {
  return t == SignificanceTest::kHsd ? "HSD" : "paired";
}

inline SignificanceTest parse_test(std::string_view name) {
  if (name == "hsd" || name == "HSD") return SignificanceTest::kHsd;
  if (name == "paired" || name == "t" || name == "ttest") return SignificanceTest::kPaired;
  throw DataError("unknown test '" + std::string(name) + "' (expected hsd or paired)");
}

struct PairSignificance {
  std::size_t a = 0;
  std::size_t b = 0;
  double mean_difference = 0.0;  // a relative to b
  double statistic = 0.0;
  double p_value = 1.0;
  double p_corrected = 1.0;
  bool significant = false;
  std::size_t n = 0;
};

struct SignificanceReport {
  Method method = Method::kDeltaRR1;
  SignificanceTest test = SignificanceTest::kPaired;
  double alpha = 0.05;
  std::size_t pairs = 0;
  std::size_t significant = 0;
  double percent = 0.0;
  std::vector<PairSignificance> per_pair;
};

// Per-topic values of a method for every pair: values[pair][topic].
inline std::vector<std::vector<double>> pair_topic_values(const Collection& c,
                                                          Method method,
                                                          unsigned threads) {
  const auto pairs = run_pairs(c.runs());
  std::vector<std::vector<double>> values(pairs.size(),
                                          std::vector<double>(c.topic_count()));
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    for (std::size_t t = 0; t < c.topic_count(); ++t) {
      values[p][t] = preference_double(method, c.at(pairs[p].a, t),
                                       c.at(pairs[p].b, t));
    }
  });
  return values;
}

// Systems x topics matrix for HSD. Reciprocal rank is a per-system metric
// and is used directly. Preference methods have no per-system score, so
// system s on topic t scores the mean of its preference against every other
// system on t.
inline Eigen::MatrixXd hsd_score_matrix(const Collection& c, Method method,
                                        unsigned threads) {
  const std::size_t k = c.runs();
  const std::size_t n = c.topic_count();
  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                 static_cast<Eigen::Index>(n));
  if (method == Method::kDeltaRR1) {
    for (std::size_t s = 0; s < k; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        scores(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) =
            to_double(reciprocal_rank(c.at(s, t)));
      }
    }
    return scores;
  }
  const auto pairs = run_pairs(k);
  const auto values = pair_topic_values(c, method, threads);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t t = 0; t < n; ++t) {
      scores(static_cast<Eigen::Index>(pairs[p].a), static_cast<Eigen::Index>(t)) +=
          values[p][t];
      scores(static_cast<Eigen::Index>(pairs[p].b), static_cast<Eigen::Index>(t)) -=
          values[p][t];
    }
  }
  scores /= static_cast<double>(k - 1);
  return scores;
}

// Share of run pairs with a significant difference at alpha. Paired tests:
// t-test on per-topic δRR1 or rrLP, exact sign test on sgnLP counts (ties
// dropped), Bonferroni over all pairs. HSD: hsd_score_matrix then Tukey.
inline SignificanceReport discriminative_power(const Collection& c, Method method,
                                               SignificanceTest test,
                                               double alpha = 0.05,
                                               unsigned threads = 0) {
  require_pairs(c);
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must lie in (0, 1)");
  if (c.topic_count() < 2) throw DataError("significance testing needs >= 2 topics");
  const auto pairs = run_pairs(c.runs());
  SignificanceReport out;
  out.method = method;
  out.test = test;
  out.alpha = alpha;
  out.pairs = pairs.size();
  out.per_pair.resize(pairs.size());

  if (test == SignificanceTest::kHsd) {
    const auto scores = hsd_score_matrix(c, method, threads);
    stats::HsdOptions options;
    options.threads = threads;
    const auto hsd = stats::tukey_hsd(scores, alpha, options);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto& h = hsd.pairs[p];
      auto& row = out.per_pair[p];
      row.a = h.a;
      row.b = h.b;
      row.mean_difference = h.mean_difference;
      row.statistic = h.result.statistic;
      row.p_value = h.result.p_value;
      row.p_corrected = h.result.p_value;
      row.significant = h.significant;
      row.n = c.topic_count();
    }
  } else {
    const auto values = pair_topic_values(c, method, threads);
    std::vector<double> raw(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t p) {
      auto& row = out.per_pair[p];
      row.a = pairs[p].a;
      row.b = pairs[p].b;
      row.n = values[p].size();
      row.mean_difference = stats::mean(values[p]);
      if (method == Method::kSgnLP) {
        std::uint64_t pos = 0, neg = 0;
        for (double v : values[p]) {
          pos += v > 0;
          neg += v < 0;
        }
        if (pos + neg == 0) {
          row.statistic = 0.0;
          row.p_value = 1.0;
        } else {
          const auto r = stats::sign_test(pos, neg);
          row.statistic = r.statistic;
          row.p_value = r.p_value;
        }
      } else {
        const auto r = stats::paired_t_test(values[p]);
        row.statistic = r.statistic;
        row.p_value = r.p_value;
      }
      raw[p] = row.p_value;
    });
    const auto corrected = stats::bonferroni(raw);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      out.per_pair[p].p_corrected = corrected[p];
      out.per_pair[p].significant = corrected[p] < alpha;
    }
  }
  for (const auto& row : out.per_pair) out.significant += row.significant;
  out.percent = out.pairs == 0 ? 0.0
                               : 100.0 * static_cast<double>(out.significant) /
                                     static_cast<double>(out.pairs);
  return out;
}

}  // namespace lexiprec::experiments

#endif  // LEXIPREC_EXPERIMENTS_HPP_
