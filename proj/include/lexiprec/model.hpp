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

#ifndef LEXIPREC_MODEL_HPP_
#define LEXIPREC_MODEL_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lexiprec/error.hpp"
#include "lexiprec/rational.hpp"

namespace lexiprec {

using TopicId = std::string;
using DocId = std::string;
using GradeTable = std::map<TopicId, std::map<DocId, int>>;

// Graded relevance judgments with a binarization policy: a document is
// relevant to a topic when its grade is at least the threshold.
class Judgments {
 public:
  Judgments() = default;

  explicit Judgments(GradeTable grades, int binarization_threshold = 1)
      : grades_(std::move(grades)), threshold_(binarization_threshold) {
    if (threshold_ < 1) {
      throw DataError("binarization threshold must be >= 1, got " +
                      std::to_string(threshold_));
    }
    topics_.reserve(grades_.size());
    for (const auto& [topic, docs] : grades_) {
      topics_.push_back(topic);
      auto& rel = relevant_[topic];
      for (const auto& [doc, grade] : docs) {
        if (grade < 0) {
          throw DataError("negative grade " + std::to_string(grade) +
                          " for topic " + topic + ", document " + doc);
        }
        if (grade >= threshold_) rel.insert(doc);
        total_relevant_ += grade >= threshold_ ? 1 : 0;
      }
    }
  }

  // Topics in lexicographic order.
  const std::vector<TopicId>& topics() const noexcept { return topics_; }
  bool has_topic(const TopicId& topic) const { return grades_.contains(topic); }
  int binarization_threshold() const noexcept { return threshold_; }
  const GradeTable& grades() const noexcept { return grades_; }

  std::optional<int> grade(const TopicId& topic, const DocId& doc) const {
    auto t = grades_.find(topic);
    if (t == grades_.end()) return std::nullopt;
    auto d = t->second.find(doc);
    if (d == t->second.end()) return std::nullopt;
    return d->second;
  }

  const std::unordered_set<DocId>& relevant_set(const TopicId& topic) const {
    auto it = relevant_.find(topic);
    if (it == relevant_.end()) {
      throw DataError("topic has no judgments: " + topic);
    }
    return it->second;
  }

  std::size_t num_relevant(const TopicId& topic) const {
    return relevant_set(topic).size();
  }

  // Relevant labels across the whole collection.
  std::size_t total_relevant() const noexcept { return total_relevant_; }

  Judgments with_threshold(int threshold) const {
    return Judgments(grades_, threshold);
  }

 private:
  GradeTable grades_;
  int threshold_ = 1;
  std::vector<TopicId> topics_;
  std::unordered_map<TopicId, std::unordered_set<DocId>> relevant_;
  std::size_t total_relevant_ = 0;
};

// One system's ranked output: per topic, distinct documents with the most
// preferred first.
class RunRanking {
 public:
  RunRanking() = default;

  RunRanking(std::string tag, std::map<TopicId, std::vector<DocId>> rankings,
             std::optional<std::size_t> depth = std::nullopt)
      : tag_(std::move(tag)), rankings_(std::move(rankings)) {
    std::size_t longest = 0;
    for (const auto& [topic, docs] : rankings_) {
      std::unordered_set<std::string_view> seen;
      seen.reserve(docs.size());
      for (const auto& doc : docs) {
        if (!seen.insert(doc).second) {
          throw DataError("duplicate document " + doc + " for topic " + topic +
                          " in run " + tag_);
        }
      }
      longest = std::max(longest, docs.size());
    }
    depth_ = depth.value_or(longest);
    if (longest > depth_) {
      throw DataError("run " + tag_ + " retrieves " + std::to_string(longest) +
                      " documents, more than its depth " +
                      std::to_string(depth_));
    }
  }

  const std::string& tag() const noexcept { return tag_; }
  std::size_t depth() const noexcept { return depth_; }
  const std::map<TopicId, std::vector<DocId>>& rankings() const noexcept {
    return rankings_;
  }
  bool has_topic(const TopicId& topic) const {
    return rankings_.contains(topic);
  }

  // Missing topics read as an empty ranking.
  const std::vector<DocId>& ranking(const TopicId& topic) const {
    static const std::vector<DocId> kEmpty;
    auto it = rankings_.find(topic);
    return it == rankings_.end() ? kEmpty : it->second;
  }

  bool operator==(const RunRanking&) const = default;

 private:
  std::string tag_;
  std::map<TopicId, std::vector<DocId>> rankings_;
  std::size_t depth_ = 0;
};

// Sorted 1-based ranks of the retrieved relevant documents of one ranking,
// together with the topic's relevant count R. Relevant documents that were
// not retrieved are absent; level i > size() has utility zero.
class PositionVector {
 public:
  using Position = std::uint32_t;

  PositionVector() = default;

  PositionVector(std::vector<Position> positions, std::uint32_t total_relevant,
                 std::uint64_t corpus_size = 0)
      : positions_(std::move(positions)),
        total_relevant_(total_relevant),
        corpus_size_(corpus_size) {
    if (positions_.size() > total_relevant_) {
      throw DataError("position vector has " +
                      std::to_string(positions_.size()) +
                      " entries but only " + std::to_string(total_relevant_) +
                      " relevant documents");
    }
    Position prev = 0;
    for (Position p : positions_) {
      if (p <= prev) {
        throw DataError("positions must be >= 1 and strictly increasing");
      }
      prev = p;
    }
    if (corpus_size_ != 0 && prev > corpus_size_) {
      throw DataError("position " + std::to_string(prev) +
                      " exceeds corpus size " + std::to_string(corpus_size_));
    }
  }

  std::span<const Position> positions() const noexcept { return positions_; }
  std::uint32_t total_relevant() const noexcept { return total_relevant_; }
  std::uint64_t corpus_size() const noexcept { return corpus_size_; }
  std::size_t retrieved() const noexcept { return positions_.size(); }
  std::size_t unretrieved() const noexcept {
    return total_relevant_ - positions_.size();
  }

  // Position of the level-th relevant document (1-based), if retrieved.
  std::optional<Position> at_level(std::size_t level) const noexcept {
    if (level == 0 || level > positions_.size()) return std::nullopt;
    return positions_[level - 1];
  }

  // The vector with recall level 1 masked out: positions of relevant
  // documents 2..R, over R - 1 relevant documents. Positions keep their
  // original ranks.
  PositionVector suffix() const {
    if (total_relevant_ == 0) {
      throw DataError("suffix of a position vector with no relevant documents");
    }
    std::vector<Position> rest;
    if (!positions_.empty()) rest.assign(positions_.begin() + 1, positions_.end());
    return PositionVector(std::move(rest), total_relevant_ - 1, corpus_size_);
  }

  bool operator==(const PositionVector&) const = default;

 private:
  std::vector<Position> positions_;
  std::uint32_t total_relevant_ = 0;
  std::uint64_t corpus_size_ = 0;
};

// Outcome of comparing two rankings: the decisive recall level, the
// direction, and the signed magnitude.
struct Preference {
  std::optional<std::uint32_t> istar;
  int sign = 0;
  Rational magnitude;

  bool operator==(const Preference&) const = default;
};

// Builds the position vector of `topic` for `run`. A run without the topic is
// an empty ranking.
inline PositionVector position_vector(const RunRanking& run,
                                      const Judgments& judgments,
                                      const TopicId& topic,
                                      std::uint64_t corpus_size = 0) {
  const auto& relevant = judgments.relevant_set(topic);
  const auto& docs = run.ranking(topic);
  std::vector<PositionVector::Position> positions;
  if (!relevant.empty()) {
    for (std::size_t rank = 0; rank < docs.size(); ++rank) {
      if (relevant.contains(docs[rank])) {
        positions.push_back(static_cast<PositionVector::Position>(rank + 1));
        if (positions.size() == relevant.size()) break;
      }
    }
  }
  return PositionVector(std::move(positions),
                        static_cast<std::uint32_t>(relevant.size()),
                        corpus_size);
}

// One row of a submission for a single topic.
struct ScoredRow {
  DocId doc;
  long rank = 0;
  double score = 0.0;
};

enum class OrderingPolicy {
  // Score descending, ties broken by document identifier descending. This is
  // what the standard TREC evaluation tool does.
  kScore,
  // Submitted rank ascending; ties fall back to the score policy.
  kRank,
};

inline std::vector<DocId> order_submission(std::span<const ScoredRow> rows,
                                           OrderingPolicy policy =
                                               OrderingPolicy::kScore) {
  std::vector<const ScoredRow*> sorted;
  sorted.reserve(rows.size());
  for (const auto& row : rows) sorted.push_back(&row);

  auto by_score = [](const ScoredRow* a, const ScoredRow* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->doc > b->doc;
  };
  if (policy == OrderingPolicy::kScore) {
    std::sort(sorted.begin(), sorted.end(), by_score);
  } else {
    std::sort(sorted.begin(), sorted.end(),
              [&](const ScoredRow* a, const ScoredRow* b) {
                if (a->rank != b->rank) return a->rank < b->rank;
                return by_score(a, b);
              });
  }

  std::vector<DocId> ordered;
  ordered.reserve(sorted.size());
  std::unordered_set<std::string_view> seen;
  seen.reserve(sorted.size());
  for (const ScoredRow* row : sorted) {
    if (!seen.insert(row->doc).second) {
      throw DataError("duplicate document " + row->doc);
    }
    ordered.push_back(row->doc);
  }
  return ordered;
}

}  // namespace lexiprec

#endif  // LEXIPREC_MODEL_HPP_
