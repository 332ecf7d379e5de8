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

#ifndef LEXIPREC_INGEST_HPP_
#define LEXIPREC_INGEST_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "lexiprec/error.hpp"
#include "lexiprec/model.hpp"
#include "lexiprec/prng.hpp"

namespace lexiprec {

namespace detail {

// Splits on runs of spaces and tabs; a trailing '\r' is treated as space.
inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

}  // namespace detail

struct RunParseOptions {
  OrderingPolicy ordering = OrderingPolicy::kScore;
  // Keep only the top `max_depth` documents per topic after ordering.
  std::optional<std::size_t> max_depth;
};

// One row of a six-column run file.
struct RunFileRow {
  std::string topic;
  std::string literal;
  std::string document;
  long rank = 0;
  double score = 0.0;
  std::string run_tag;
};

// One row of a four-column qrels file.
struct QrelsRow {
  std::string topic;
  std::string iteration;
  std::string document;
  int grade = 0;
};

inline RunFileRow parse_run_row(std::string_view line, std::size_t line_no) {
  const auto f = detail::split_fields(line);
  if (f.size() != 6) {
    throw ParseError(line_no, "expected 6 fields in run row, got " +
                                  std::to_string(f.size()));
  }
  auto rank = detail::parse_number<long>(f[3]);
  if (!rank) throw ParseError(line_no, "bad rank '" + std::string(f[3]) + "'");
  auto score = detail::parse_number<double>(f[4]);
  if (!score || !std::isfinite(*score)) {
    throw ParseError(line_no, "bad score '" + std::string(f[4]) + "'");
  }
  return RunFileRow{std::string(f[0]), std::string(f[1]), std::string(f[2]),
                    *rank, *score, std::string(f[5])};
}

inline QrelsRow parse_qrels_row(std::string_view line, std::size_t line_no) {
  const auto f = detail::split_fields(line);
  if (f.size() != 4) {
    throw ParseError(line_no, "expected 4 fields in qrels row, got " +
                                  std::to_string(f.size()));
  }
  auto grade = detail::parse_number<int>(f[3]);
  if (!grade) throw ParseError(line_no, "bad grade '" + std::string(f[3]) + "'");
  if (*grade < 0) {
    throw ParseError(line_no, "negative grade " + std::to_string(*grade));
  }
  return QrelsRow{std::string(f[0]), std::string(f[1]), std::string(f[2]),
                  *grade};
}

inline RunRanking parse_run(std::istream& in, const RunParseOptions& options = {}) {
  std::map<TopicId, std::vector<ScoredRow>> rows;
  std::map<TopicId, std::map<DocId, std::size_t>> first_seen;
  std::optional<std::string> tag;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::split_fields(line).empty()) continue;
    RunFileRow row = parse_run_row(line, line_no);
    if (!tag) {
      tag = row.run_tag;
    } else if (*tag != row.run_tag) {
      throw ParseError(line_no, "inconsistent run tag '" + row.run_tag +
                                    "', expected '" + *tag + "'");
    }
    auto [it, inserted] = first_seen[row.topic].emplace(row.document, line_no);
    if (!inserted) {
      throw ParseError(line_no, "duplicate document " + row.document +
                                    " for topic " + row.topic);
    }
    rows[row.topic].push_back(
        ScoredRow{std::move(row.document), row.rank, row.score});
  }
  if (!tag) throw DataError("run has no rows");

  std::map<TopicId, std::vector<DocId>> rankings;
  for (auto& [topic, topic_rows] : rows) {
    auto ordered = order_submission(topic_rows, options.ordering);
    if (options.max_depth && ordered.size() > *options.max_depth) {
      ordered.resize(*options.max_depth);
    }
    rankings.emplace(topic, std::move(ordered));
  }
  return RunRanking(*tag, std::move(rankings), options.max_depth);
}

inline Judgments parse_qrels(std::istream& in, int binarization_threshold = 1) {
  GradeTable grades;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::split_fields(line).empty()) continue;
    QrelsRow row = parse_qrels_row(line, line_no);
    auto [it, inserted] = grades[row.topic].emplace(row.document, row.grade);
    if (!inserted) {
      throw ParseError(line_no, "duplicate judgment for topic " + row.topic +
                                    ", document " + row.document);
    }
  }
  return Judgments(std::move(grades), binarization_threshold);
}

// Rows are written in rank order with descending integral scores, so
// parse_run(write_run(x)) reproduces x.
inline void write_run(std::ostream& out, const RunRanking& run) {
  for (const auto& [topic, docs] : run.rankings()) {
    const std::size_t n = docs.size();
    for (std::size_t r = 0; r < n; ++r) {
      out << topic << " Q0 " << docs[r] << ' ' << (r + 1) << ' ' << (n - r)
          << ' ' << run.tag() << '\n';
    }
  }
}

inline void write_qrels(std::ostream& out, const Judgments& judgments) {
  for (const auto& [topic, docs] : judgments.grades()) {
    for (const auto& [doc, grade] : docs) {
      out << topic << " 0 " << doc << ' ' << grade << '\n';
    }
  }
}

inline RunRanking load_run(const std::filesystem::path& path,
                           const RunParseOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open run file " + path.string());
  try {
    return parse_run(in, options);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path.string());
  }
}

inline Judgments load_qrels(const std::filesystem::path& path,
                            int binarization_threshold = 1) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open qrels file " + path.string());
  try {
    return parse_qrels(in, binarization_threshold);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path.string());
  }
}

// Expands directories into their regular files (sorted by name) and keeps
// plain files as given.
inline std::vector<std::filesystem::path> expand_run_paths(
    const std::vector<std::filesystem::path>& inputs) {
  std::vector<std::filesystem::path> paths;
  for (const auto& input : inputs) {
    if (std::filesystem::is_directory(input)) {
      std::vector<std::filesystem::path> found;
      for (const auto& entry : std::filesystem::directory_iterator(input)) {
        if (entry.is_regular_file()) found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      paths.insert(paths.end(), found.begin(), found.end());
    } else if (std::filesystem::is_regular_file(input)) {
      paths.push_back(input);
    } else {
      throw DataError("no such run file or directory: " + input.string());
    }
  }
  return paths;
}

struct SynthParams {
  std::size_t n_topics = 10;
  std::size_t relevant_per_topic = 5;
  std::size_t depth = 100;
  // Documents per topic; 0 means equal to depth.
  std::size_t corpus = 0;
  std::size_t n_runs = 5;
  // Run j (0-based) uses quality * (j + 1) / n_runs, so runs are ordered by
  // strength. A relevant document's sampling weight is
  // 1 + relevance_boost * run_quality; non-relevant documents weigh 1.
  double quality = 0.5;
  double relevance_boost = 4.0;
  std::uint64_t seed = 0;
};

struct SynthData {
  Judgments judgments;
  std::vector<RunRanking> runs;
};

namespace detail {

inline std::string padded(std::size_t value, std::size_t count) {
  std::string digits = std::to_string(value);
  std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return digits;
}

}  // namespace detail

inline std::string synth_topic_id(std::size_t t, std::size_t n_topics) {
  return "T" + detail::padded(t, n_topics);
}

inline std::string synth_doc_id(std::size_t t, std::size_t d,
                                std::size_t n_topics, std::size_t corpus) {
  return synth_topic_id(t, n_topics) + "-D" + detail::padded(d, corpus);
}

// Deterministic synthetic benchmark. In every topic documents 0..R-1 are
// relevant (grade 1). Each run orders a topic's corpus by weighted sampling
// without replacement: document d gets key log(u_d) / w_d with
// u_d = ((x >> 11) + 1) * 2^-53, x = output d of the stream
// Prng(seed).substream(run).substream(topic), and documents are ranked by
// descending key (ties by ascending document index). The top `depth` are
// retrieved.
inline SynthData synth_generate(const SynthParams& p) {
  if (p.n_topics < 1 || p.relevant_per_topic < 1 || p.depth < 1 ||
      p.n_runs < 1) {
    throw DataError("synthetic counts must all be >= 1");
  }
  if (!(p.quality >= 0.0 && p.quality <= 1.0)) {
    throw DataError("quality must lie in [0, 1]");
  }
  if (!(p.relevance_boost >= 0.0) || !std::isfinite(p.relevance_boost)) {
    throw DataError("relevance boost must be a finite value >= 0");
  }
  const std::size_t corpus = p.corpus == 0 ? p.depth : p.corpus;
  if (corpus < p.depth) throw DataError("corpus must be at least the depth");
  if (p.relevant_per_topic > corpus) {
    throw DataError("more relevant documents than corpus documents");
  }

  GradeTable grades;
  for (std::size_t t = 0; t < p.n_topics; ++t) {
    auto& docs = grades[synth_topic_id(t, p.n_topics)];
    for (std::size_t d = 0; d < p.relevant_per_topic; ++d) {
      docs.emplace(synth_doc_id(t, d, p.n_topics, corpus), 1);
    }
  }

  const Prng root(p.seed);
  std::vector<RunRanking> runs;
  runs.reserve(p.n_runs);
  std::vector<std::pair<double, std::size_t>> keys(corpus);
  for (std::size_t j = 0; j < p.n_runs; ++j) {
    const double run_quality =
        p.quality * static_cast<double>(j + 1) / static_cast<double>(p.n_runs);
    const double rel_weight = 1.0 + p.relevance_boost * run_quality;
    const Prng run_stream = root.substream(j);
    std::map<TopicId, std::vector<DocId>> rankings;
    for (std::size_t t = 0; t < p.n_topics; ++t) {
      const Prng stream = run_stream.substream(t);
      for (std::size_t d = 0; d < corpus; ++d) {
        const double u =
            static_cast<double>((stream.at(d) >> 11) + 1) * 0x1.0p-53;
        const double w = d < p.relevant_per_topic ? rel_weight : 1.0;
        keys[d] = {std::log(u) / w, d};
      }
      std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      std::vector<DocId> docs;
      docs.reserve(p.depth);
      for (std::size_t r = 0; r < p.depth; ++r) {
        docs.push_back(synth_doc_id(t, keys[r].second, p.n_topics, corpus));
      }
      rankings.emplace(synth_topic_id(t, p.n_topics), std::move(docs));
    }
    runs.emplace_back("synth" + detail::padded(j, p.n_runs), std::move(rankings),
                      p.depth);
  }
  return SynthData{Judgments(std::move(grades)), std::move(runs)};
}

}  // namespace lexiprec

#endif  // LEXIPREC_INGEST_HPP_
