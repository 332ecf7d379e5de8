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

#include "lexiprec/ingest.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lexiprec/theory.hpp"

namespace lexiprec {
namespace {

RunRanking parse_run_text(const std::string& text, RunParseOptions opts = {}) {
  std::istringstream in(text);
  return parse_run(in, opts);
}

Judgments parse_qrels_text(const std::string& text, int threshold = 1) {
  std::istringstream in(text);
  return parse_qrels(in, threshold);
}

TEST(ParseRunTest, SingleRow) {
  const auto run = parse_run_text("q1 Q0 dA 1 2.5 sys1\n");
  EXPECT_EQ(run.tag(), "sys1");
  EXPECT_EQ(run.ranking("q1"), (std::vector<DocId>{"dA"}));
}

TEST(ParseRunTest, WhitespaceVariantsAndBlankLines) {
  const auto run = parse_run_text("\nq1\tQ0  dB 2 1.0 s  \r\n\n q1 Q0 dA 1 +2 s\n");
  EXPECT_EQ(run.ranking("q1"), (std::vector<DocId>{"dA", "dB"}));
}

TEST(ParseRunTest, FiveFieldsReportsLine) {
  try {
    parse_run_text("q1 Q0 dA 1 2.5 s\nq1 Q0 dB 2 1.5\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseRunTest, DuplicateDocument) {
  EXPECT_THROW(parse_run_text("q1 Q0 dA 1 2 s\nq1 Q0 dA 2 1 s\n"), ParseError);
}

TEST(ParseRunTest, InconsistentTagAndBadNumbers) {
  EXPECT_THROW(parse_run_text("q1 Q0 dA 1 2 s\nq1 Q0 dB 2 1 t\n"), ParseError);
  EXPECT_THROW(parse_run_text("q1 Q0 dA x 2 s\n"), ParseError);
  EXPECT_THROW(parse_run_text("q1 Q0 dA 1 nan s\n"), ParseError);
  EXPECT_THROW(parse_run_text(""), DataError);
}

TEST(ParseRunTest, TrustRankAndDepth) {
  const std::string text = "q Q0 a 2 9 s\nq Q0 b 1 1 s\nq Q0 c 3 0 s\n";
  RunParseOptions opts;
  opts.ordering = OrderingPolicy::kRank;
  EXPECT_EQ(parse_run_text(text, opts).ranking("q"), (std::vector<DocId>{"b", "a", "c"}));
  opts.ordering = OrderingPolicy::kScore;
  opts.max_depth = 2;
  EXPECT_EQ(parse_run_text(text, opts).ranking("q"), (std::vector<DocId>{"a", "b"}));
}

TEST(ParseQrelsTest, Examples) {
  EXPECT_EQ(parse_qrels_text("q1 0 dA 2\n").grade("q1", "dA"), 2);
  EXPECT_THROW(parse_qrels_text("q1 0 dA 1\nq1 0 dA 1\n"), ParseError);
  EXPECT_THROW(parse_qrels_text("q1 0 dA -1\n"), ParseError);
  EXPECT_THROW(parse_qrels_text("q1 0 dA\n"), ParseError);
  EXPECT_EQ(parse_qrels_text("q1 0 dA 1\nq1 0 dB 2\n", 2).num_relevant("q1"), 1u);
}

TEST(RoundTripTest, RunAndQrels) {
  const RunRanking run("sys", {{"q1", {"c", "a", "b"}}, {"q2", {"z"}}});
  std::ostringstream out;
  write_run(out, run);
  EXPECT_EQ(parse_run_text(out.str()), run);

  const Judgments j(GradeTable{{"q1", {{"a", 0}, {"b", 3}}}, {"q2", {{"z", 1}}}});
  std::ostringstream qout;
  write_qrels(qout, j);
  EXPECT_EQ(parse_qrels_text(qout.str()).grades(), j.grades());
}

TEST(LoadTest, ErrorsNameTheFile) {
  const auto path = std::filesystem::temp_directory_path() / "lexiprec_bad.qrels";
  {
    std::ofstream f(path);
    f << "q 0 d 1\nq 0 d\n";
  }
  try {
    load_qrels(path);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.source(), path.string());
    EXPECT_EQ(e.line(), 2u);
  }
  std::filesystem::remove(path);
  EXPECT_THROW(load_run("/nonexistent/run"), DataError);
}

std::string serialize(const SynthData& data) {
  std::ostringstream out;
  write_qrels(out, data.judgments);
  for (const auto& run : data.runs) write_run(out, run);
  return out.str();
}

TEST(SynthTest, DeterministicPerSeed) {
  SynthParams p;
  p.seed = 7;
  const auto a = serialize(synth_generate(p));
  EXPECT_EQ(a, serialize(synth_generate(p)));
  p.seed = 8;
  EXPECT_NE(a, serialize(synth_generate(p)));
}

TEST(SynthTest, Shape) {
  SynthParams p;
  p.n_runs = 2;
  p.n_topics = 1;
  p.depth = 30;
  p.corpus = 50;
  const auto data = synth_generate(p);
  ASSERT_EQ(data.runs.size(), 2u);
  for (const auto& run : data.runs) {
    EXPECT_EQ(run.rankings().size(), 1u);
    EXPECT_EQ(run.ranking(synth_topic_id(0, 1)).size(), 30u);
  }
  EXPECT_EQ(data.judgments.num_relevant(synth_topic_id(0, 1)), 5u);
}

TEST(SynthTest, InvalidParameters) {
  SynthParams p;
  p.n_topics = 0;
  EXPECT_THROW(synth_generate(p), DataError);
  p = {};
  p.quality = 1.5;
  EXPECT_THROW(synth_generate(p), DataError);
  p = {};
  p.relevant_per_topic = 200;
  EXPECT_THROW(synth_generate(p), DataError);
}

TEST(SynthTest, QualityRaisesRelevantDocuments) {
  SynthParams p;
  p.n_topics = 200;
  p.n_runs = 2;
  p.quality = 1.0;
  const auto data = synth_generate(p);
  auto mean_first = [&](const RunRanking& run) {
    double sum = 0;
    for (const auto& topic : data.judgments.topics()) {
      sum += position_vector(run, data.judgments, topic).at_level(1).value_or(101);
    }
    return sum / 200.0;
  };
  EXPECT_LT(mean_first(data.runs[1]), mean_first(data.runs[0]));
}

// With quality 0 every arrangement of the relevant documents is equally
// likely, so the first relevant position r1 has probability C(D-r1, R-1) /
// C(D, R), which is exactly tie_probability(D, R, r1). Both the r1 marginal
// and the full arrangement distribution are checked by chi-square at 0.1%.
TEST(SynthTest, QualityZeroIsUniformOverArrangements) {
  constexpr std::uint32_t kD = 10, kR = 3;
  SynthParams p;
  p.n_topics = 6000;
  p.relevant_per_topic = kR;
  p.depth = kD;
  p.n_runs = 1;
  p.quality = 0.0;
  p.seed = 2024;
  const auto data = synth_generate(p);
  std::map<std::uint32_t, double> by_r1;
  std::map<std::vector<std::uint32_t>, double> by_arrangement;
  for (const auto& topic : data.judgments.topics()) {
    const auto pv = position_vector(data.runs[0], data.judgments, topic);
    ASSERT_EQ(pv.retrieved(), kR);
    by_r1[*pv.at_level(1)] += 1;
    by_arrangement[{pv.positions().begin(), pv.positions().end()}] += 1;
  }
  const double n = static_cast<double>(p.n_topics);

  double chi_r1 = 0;
  for (std::uint32_t r1 = 1; r1 <= kD - kR + 1; ++r1) {
    const double expected = n * to_double(theory::tie_probability(kD, kR, r1));
    const double diff = by_r1[r1] - expected;
    chi_r1 += diff * diff / expected;
  }
  const boost::math::chi_squared r1_dist(kD - kR);
  EXPECT_LT(chi_r1, boost::math::quantile(r1_dist, 0.999));

  const double cells = to_double(Rational(theory::binomial(kD, kR)));
  const double expected = n / cells;
  double chi_all = 0;
  theory::for_each_arrangement(kD, kR, [&](std::span<const std::uint32_t> a) {
    const double diff = by_arrangement[{a.begin(), a.end()}] - expected;
    chi_all += diff * diff / expected;
  });
  const boost::math::chi_squared all_dist(cells - 1);
  EXPECT_LT(chi_all, boost::math::quantile(all_dist, 0.999));
}

}  // namespace
}  // namespace lexiprec
