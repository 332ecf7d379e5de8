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

#ifndef LEXIPREC_CLI_HPP_
#define LEXIPREC_CLI_HPP_

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lexiprec/error.hpp"
#include "lexiprec/experiments.hpp"
#include "lexiprec/ingest.hpp"
#include "lexiprec/metrics.hpp"
#include "lexiprec/preference.hpp"
#include "lexiprec/report.hpp"
#include "lexiprec/stats.hpp"
#include "lexiprec/theory.hpp"

namespace lexiprec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

inline constexpr const char* kFormatsHelp = R"(File formats:
  run    six whitespace-separated columns per line:
           topic Q0 docid rank score tag
         Documents are ordered by score descending, ties by docid
         descending (use --trust-rank to order by the rank column).
  qrels  four columns per line:
           topic iteration docid grade
         A document is relevant when grade >= --binarize-threshold.
Reports are CSV (config as leading '# key=value' lines, then a header row
per table) or JSON ({"experiment", "config", "results": {table: [rows]}}).
Only topics with at least one relevant document are evaluated.
Rows are ordered by run tag, then topic, lexicographically.
)";

// Options shared by the data-driven subcommands.
struct Common {
  std::string qrels;
  std::vector<std::string> runs;
  int threshold = 1;
  bool trust_rank = false;
  std::string format = "csv";
  std::string out;
  int precision = 4;
  bool exact = false;
  unsigned threads = 0;
};

inline void add_output_options(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app->add_option("--out", c.out, "Write the report to this file (default: stdout)");
  app->add_option("--precision", c.precision, "Decimals for real values")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--exact", c.exact, "Print rational values exactly as n/d");
  app->add_option("--threads", c.threads,
                  "Worker threads (0 = available parallelism); output does not depend on it")
      ->capture_default_str();
}

inline void add_input_options(CLI::App* app, Common& c, bool need_runs = true) {
  app->add_option("--qrels", c.qrels, "Relevance judgments file")->required();
  if (need_runs) {
    app->add_option("--runs", c.runs, "Run files and/or directories of run files")
        ->required();
  }
  app->add_option("--binarize-threshold", c.threshold,
                  "Minimum grade that counts as relevant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--trust-rank", c.trust_rank,
                "Order run rows by their rank column instead of score");
}

struct Loaded {
  Judgments judgments;
  std::vector<RunRanking> runs;
  std::vector<TopicId> topics;
};

inline std::vector<RunRanking> load_runs(const std::vector<std::string>& inputs,
                                         bool trust_rank) {
  std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
  RunParseOptions options;
  options.ordering = trust_rank ? OrderingPolicy::kRank : OrderingPolicy::kScore;
  std::vector<RunRanking> runs;
  for (const auto& path : expand_run_paths(paths)) {
    runs.push_back(load_run(path, options));
  }
  if (runs.empty()) throw DataError("no run files found");
  return runs;
}

inline Loaded load_inputs(const Common& c) {
  Loaded data{load_qrels(c.qrels, c.threshold), load_runs(c.runs, c.trust_rank), {}};
  data.topics = experiments::evaluable_topics(data.judgments);
  if (data.topics.empty()) throw DataError("qrels contain no relevant documents");
  return data;
}

inline report::OutputSpec output_spec(const Common& c) {
  report::OutputSpec spec;
  spec.format = report::parse_format(c.format);
  spec.precision = c.precision;
  spec.exact = c.exact;
  return spec;
}

inline void base_config(report::Report& r, const Common& c, const Loaded& data) {
  r.set("qrels", c.qrels);
  r.set("binarize_threshold", c.threshold);
  r.set("ordering", c.trust_rank ? "rank" : "score");
  r.set("runs", data.runs.size());
  r.set("topics", data.topics.size());
}

inline void emit(const report::Report& r, const Common& c, std::ostream& out) {
  const auto spec = output_spec(c);
  if (c.out.empty()) {
    report::write(out, r, spec);
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw DataError("cannot write " + c.out);
  report::write(file, r, spec);
}

inline std::string join_positions(const PositionVector& pv) {
  std::string s;
  for (auto p : pv.positions()) {
    if (!s.empty()) s += ' ';
    s += std::to_string(p);
  }
  return s;
}

inline std::string join_doubles(const std::vector<double>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

// ---------------------------------------------------------------------------
// Subcommands

inline report::Report cmd_eval(const Common& c) {
  const auto data = load_inputs(c);
  const experiments::Collection col(data.runs, data.judgments, data.topics, c.threads);
  report::Report r("eval");
  base_config(r, c, data);
  auto& t = r.table("per_topic", {"run", "topic", "relevant", "retrieved_relevant",
                                  "rr", "esl1", "positions"});
  auto& m = r.table("mean", {"run", "topics", "mrr"});
  for (std::size_t run = 0; run < col.runs(); ++run) {
    Rational sum = 0;
    for (std::size_t topic = 0; topic < col.topic_count(); ++topic) {
      const auto& pv = col.at(run, topic);
      const Rational rr = reciprocal_rank(pv);
      sum += rr;
      t.add({report::cell(col.run_tags()[run]), report::cell(col.topics()[topic]),
             report::cell(pv.total_relevant()), report::cell(pv.retrieved()),
             report::cell(rr), report::cell(esl1(pv)), report::cell(join_positions(pv))});
    }
    m.add({report::cell(col.run_tags()[run]), report::cell(col.topic_count()),
           report::cell(Rational(sum / static_cast<long long>(col.topic_count())))});
  }
  return r;
}

inline report::Report cmd_compare(const Common& c, const std::string& run_a,
                                  const std::string& run_b,
                                  const std::string& scheme_name) {
  const Method method = parse_method(scheme_name);
  Common inputs = c;
  inputs.runs = {run_a, run_b};
  const auto data = load_inputs(inputs);
  const auto& a = data.runs[0];
  const auto& b = data.runs[1];
  report::Report r("compare");
  base_config(r, c, data);
  r.set("run_a", a.tag());
  r.set("run_b", b.tag());
  r.set("scheme", to_string(method));
  auto& t = r.table("per_topic", {"topic", "istar", "sign", "magnitude", "drr1"});
  Rational sum = 0;
  std::int64_t wins = 0, losses = 0, ties = 0;
  for (const auto& topic : data.topics) {
    const auto x = position_vector(a, data.judgments, topic);
    const auto y = position_vector(b, data.judgments, topic);
    const Preference pref = lexi_compare(x, y);
    const Rational value = preference_value(method, x, y);
    const int s = method == Method::kDeltaRR1 ? sign(value) : pref.sign;
    sum += value;
    wins += s > 0;
    losses += s < 0;
    ties += s == 0;
    t.add({report::cell(topic), report::cell(pref.istar), report::cell(s),
           report::cell(value), report::cell(Rational(reciprocal_rank(x) - reciprocal_rank(y)))});
  }
  auto& m = r.table("mean", {"scheme", "topics", "mean", "wins", "losses", "ties"});
  m.add({report::cell(to_string(method)), report::cell(data.topics.size()),
         report::cell(Rational(sum / static_cast<long long>(data.topics.size()))),
         report::cell(wins), report::cell(losses), report::cell(ties)});
  return r;
}

inline report::Report cmd_census(const Common& c, std::size_t max_level) {
  const auto data = load_inputs(c);
  const experiments::Collection col(data.runs, data.judgments, data.topics, c.threads);
  const auto census = experiments::tie_census(col, max_level, c.threads);
  const auto ecdf = experiments::istar_ecdf(col, c.threads);
  report::Report r("census");
  base_config(r, c, data);
  r.set("max_level", max_level);
  auto& s = r.table("summary", {"runs", "topics", "comparisons", "drr1_ties",
                                "drr1_tie_pct", "lexi_ties", "lexi_tie_pct"});
  s.add({report::cell(census.runs), report::cell(census.topics),
         report::cell(census.comparisons), report::cell(census.rr1_ties),
         report::cell(census.rr1_tie_pct), report::cell(census.lexi_ties),
         report::cell(census.lexi_tie_pct)});
  auto& f = r.table("tie_by_first_position", {"r1", "comparisons", "ties", "p_tie"});
  for (const auto& row : census.by_first_position) {
    f.add({report::cell(row.r1), report::cell(row.comparisons), report::cell(row.ties),
           report::cell(row.p_tie)});
  }
  auto& l = r.table("tie_by_level", {"level", "comparisons", "ties", "p_tie"});
  for (const auto& row : census.by_level) {
    l.add({report::cell(row.level), report::cell(row.comparisons), report::cell(row.ties),
           report::cell(row.p_tie)});
  }
  auto& e = r.table("istar_ecdf", {"level", "count", "cumulative"});
  for (const auto& row : ecdf.rows) {
    e.add({report::cell(row.level), report::cell(row.count), report::cell(row.cumulative)});
  }
  auto& u = r.table("istar_undecided", {"decided", "undecided"});
  u.add({report::cell(ecdf.decided), report::cell(ecdf.undecided)});
  return r;
}

inline std::vector<experiments::Degradation> parse_modes(const std::string& mode) {
  using experiments::Degradation;
  if (mode == "labels") return {Degradation::kLabels};
  if (mode == "queries") return {Degradation::kQueries};
  if (mode == "both") return {Degradation::kLabels, Degradation::kQueries};
  if (mode == "none") return {};
  throw DataError("unknown degradation mode '" + mode + "'");
}

inline report::Report cmd_agreement(const Common& c,
                                    const experiments::ExperimentConfig& cfg,
                                    const std::string& mode) {
  const auto data = load_inputs(c);
  const experiments::Collection col(data.runs, data.judgments, data.topics, c.threads);
  report::Report r("agreement");
  base_config(r, c, data);
  r.set("seed", cfg.seed);
  r.set("samples", cfg.n_samples);
  r.set("fractions", join_doubles(cfg.fractions));
  r.set("mode", mode);
  r.set("label_removal", cfg.stratified_labels ? "stratified" : "global");

  const auto masked = experiments::masked_prefix_agreement(col, c.threads);
  auto& m = r.table("masked_prefix", {"qualifying", "sgnlp_suffix_agree",
                                      "sgnlp_suffix_pct", "drr2_agree", "drr2_pct"});
  m.add({report::cell(masked.qualifying), report::cell(masked.sgnlp_agree),
         report::cell(masked.sgnlp_pct), report::cell(masked.drr2_agree),
         report::cell(masked.drr2_pct)});

  const auto modes = parse_modes(mode);
  if (!modes.empty()) {
    const auto curves =
        experiments::agreement_under_degradation(col, cfg, modes, c.threads);
    auto& d = r.table("degradation",
                      {"mode", "fraction", "method", "samples", "ranking_agreement",
                       "ranking_sd", "system_agreement", "system_sd", "tie_pct",
                       "tie_sd"});
    for (const auto& p : curves.points) {
      d.add({report::cell(to_string(p.mode)), report::cell(p.fraction),
             report::cell(to_string(p.method)), report::cell(p.samples),
             report::cell(p.ranking_mean), report::cell(p.ranking_sd),
             report::cell(p.system_mean), report::cell(p.system_sd),
             report::cell(p.tie_mean), report::cell(p.tie_sd)});
    }
    auto& dd = r.table("reference", {"decided_rankings", "decided_systems"});
    dd.add({report::cell(curves.decided_rankings), report::cell(curves.decided_systems)});
  }
  return r;
}

inline std::vector<Method> parse_methods(const std::string& scheme) {
  if (scheme == "all") return {Method::kRrLP, Method::kSgnLP, Method::kDeltaRR1};
  return {parse_method(scheme)};
}

inline std::vector<experiments::SignificanceTest> parse_tests(const std::string& test) {
  using experiments::SignificanceTest;
  if (test == "both") return {SignificanceTest::kHsd, SignificanceTest::kPaired};
  return {experiments::parse_test(test)};
}

inline report::Report cmd_significance(const Common& c, const std::string& test,
                                       const std::string& scheme, double alpha) {
  const auto data = load_inputs(c);
  const experiments::Collection col(data.runs, data.judgments, data.topics, c.threads);
  report::Report r("significance");
  base_config(r, c, data);
  r.set("test", test);
  r.set("scheme", scheme);
  r.set("alpha", alpha);
  auto& s = r.table("summary", {"test", "method", "pairs", "significant", "percent"});
  auto& p = r.table("pairs", {"test", "method", "run_a", "run_b", "n", "mean_difference",
                              "statistic", "p_value", "p_corrected", "significant"});
  for (auto t : parse_tests(test)) {
    for (auto method : parse_methods(scheme)) {
      const auto rep = experiments::discriminative_power(col, method, t, alpha, c.threads);
      s.add({report::cell(to_string(t)), report::cell(to_string(method)),
             report::cell(rep.pairs), report::cell(rep.significant),
             report::cell(rep.percent)});
      for (const auto& row : rep.per_pair) {
        p.add({report::cell(to_string(t)), report::cell(to_string(method)),
               report::cell(col.run_tags()[row.a]), report::cell(col.run_tags()[row.b]),
               report::cell(row.n), report::cell(row.mean_difference),
               report::cell(row.statistic), report::cell(row.p_value),
               report::cell(row.p_corrected), report::cell(row.significant)});
      }
    }
  }
  return r;
}

inline report::Report cmd_backoff(const Common& c, const experiments::BackoffConfig& cfg) {
  const auto data = load_inputs(c);
  const experiments::Collection col(data.runs, data.judgments, data.topics, c.threads);
  const auto res = experiments::backoff_analysis(col, cfg, c.threads);
  report::Report r("backoff");
  base_config(r, c, data);
  r.set("max_level", cfg.max_level);
  r.set("horizon", cfg.horizon);
  r.set("targets", cfg.targets);
  r.set("observations", res.observations);
  auto& g = r.table("correlation", {"level_i", "level_j", "pearson"});
  for (std::size_t i = 0; i < res.max_level; ++i) {
    for (std::size_t j = 0; j < res.max_level; ++j) {
      g.add({report::cell(i + 1), report::cell(j + 1),
             report::cell(res.correlation[i][j])});
    }
  }
  auto& reg = r.table("regression", {"target_level", "term", "coefficient"});
  for (const auto& fit : res.regressions) {
    for (std::size_t k = 0; k <= fit.predictor_levels.size(); ++k) {
      const std::string term =
          k == 0 ? "intercept" : "drr" + std::to_string(fit.predictor_levels[k - 1]);
      reg.add({report::cell(fit.target_level), report::cell(term),
               fit.coefficients ? report::cell((*fit.coefficients)[k]) : report::Cell()});
    }
  }
  return r;
}

struct TheoryArgs {
  bool tie_prob = false;
  bool value_ratio = false;
  bool check = false;
  std::uint32_t corpus = 0;
  std::uint32_t relevant = 0;
  std::optional<std::uint32_t> max_k;
};

// Oracle checks over small (D, R). Returns the report; `ok` is false when
// any check fails.
inline report::Report theory_check(const TheoryArgs& a, bool& ok) {
  report::Report r("theory-check");
  r.set("max_corpus", a.corpus);
  r.set("max_relevant", a.relevant);
  auto& t = r.table("checks", {"check", "cases", "failures"});
  ok = true;
  std::int64_t cases = 0, failures = 0;

  // Closed-form tie probability against enumeration counts.
  for (std::uint32_t d = 1; d <= a.corpus; ++d) {
    for (std::uint32_t rel = 1; rel <= std::min(a.relevant, d); ++rel) {
      std::map<std::uint32_t, std::uint64_t> by_first;
      std::uint64_t total = 0;
      theory::for_each_arrangement(d, rel, [&](std::span<const std::uint32_t> x) {
        ++by_first[x[0]];
        ++total;
      });
      for (std::uint32_t r1 = 1; r1 <= d - rel + 1; ++r1) {
        ++cases;
        const Rational expected = make_rational(static_cast<std::int64_t>(by_first[r1]),
                                                static_cast<std::int64_t>(total));
        failures += theory::tie_probability(d, rel, r1) != expected;
      }
    }
  }
  t.add({report::cell("tie_probability_vs_enumeration"), report::cell(cases),
         report::cell(failures)});
  ok = ok && failures == 0;

  cases = failures = 0;
  for (std::uint32_t d = 1; d <= a.corpus; ++d) {
    for (std::uint32_t rel = 0; rel <= d; ++rel) {
      for (std::uint32_t k = 0; rel + k <= d; ++k) {
        ++cases;
        const Rational lhs = theory::value_count_ratio(d, rel, k) *
                             Rational(theory::binomial(d, rel));
        failures += lhs != Rational(theory::binomial(d, rel + k));
      }
    }
  }
  t.add({report::cell("value_count_ratio_scaling"), report::cell(cases),
         report::cell(failures)});
  ok = ok && failures == 0;

  cases = failures = 0;
  const std::uint32_t psych_corpus = std::min<std::uint32_t>(a.corpus, 10);
  for (std::uint32_t d = 1; d <= psych_corpus; ++d) {
    for (std::uint32_t rel = 1; rel <= std::min<std::uint32_t>({a.relevant, d, 4}); ++rel) {
      const auto all = theory::enumerate_arrangements(d, rel);
      for (const auto& x : all) {
        for (const auto& y : all) {
          ++cases;
          const int s = sgn_lexiprecision(x, y);
          failures += theory::psych_relevance_preference(x, y) != s ||
                      theory::recall_level_preference(x, y) != s;
        }
      }
    }
  }
  t.add({report::cell("best_case_generalization"), report::cell(cases),
         report::cell(failures)});
  ok = ok && failures == 0;
  return r;
}

inline report::Report cmd_theory(const TheoryArgs& a, bool& ok) {
  ok = true;
  if (a.check) return theory_check(a, ok);
  if (a.tie_prob == a.value_ratio) {
    throw CLI::ValidationError("theory", "choose exactly one of --tie-prob, --value-ratio, --check");
  }
  if (a.relevant < 1 || a.relevant > a.corpus) {
    throw DataError("need 1 <= --relevant <= --corpus");
  }
  report::Report r("theory");
  r.set("corpus", a.corpus);
  r.set("relevant", a.relevant);
  if (a.tie_prob) {
    r.set("curve", "tie_probability");
    auto& t = r.table("tie_probability", {"D", "R", "r1", "p_tie"});
    for (std::uint32_t r1 = 1; r1 <= a.corpus - a.relevant + 1; ++r1) {
      t.add({report::cell(a.corpus), report::cell(a.relevant), report::cell(r1),
             report::cell(theory::tie_probability(a.corpus, a.relevant, r1))});
    }
  } else {
    const std::uint32_t max_k = a.max_k.value_or(a.corpus - a.relevant);
    if (a.relevant + max_k > a.corpus) throw DataError("need R + max-k <= D");
    r.set("curve", "value_count_ratio");
    r.set("max_k", max_k);
    auto& t = r.table("value_count_ratio", {"D", "R", "k", "ratio"});
    for (std::uint32_t k = 0; k <= max_k; ++k) {
      t.add({report::cell(a.corpus), report::cell(a.relevant), report::cell(k),
             report::cell(theory::value_count_ratio(a.corpus, a.relevant, k))});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Lexicographic precision toolkit for ranking evaluation", "lexiprec"};
  app.require_subcommand(1);
  app.footer(kFormatsHelp);

  Common common;
  std::function<int()> action;

  // eval
  auto* eval = app.add_subcommand("eval", "Per-topic reciprocal rank, ESL1 and relevant positions");
  add_input_options(eval, common);
  add_output_options(eval, common);
  eval->footer(kFormatsHelp);
  eval->callback([&] {
    action = [&] {
      emit(cmd_eval(common), common, out);
      return kExitOk;
    };
  });

  // compare
  std::string run_a, run_b, scheme = "rrlp";
  auto* compare = app.add_subcommand("compare", "Per-topic and mean preference between two runs");
  compare->add_option("--run-a", run_a, "First run file")->required();
  compare->add_option("--run-b", run_b, "Second run file")->required();
  compare->add_option("--scheme", scheme, "rr (δRR1), rrlp or sgnlp")->capture_default_str();
  add_input_options(compare, common, false);
  add_output_options(compare, common);
  compare->footer(kFormatsHelp);
  compare->callback([&] {
    action = [&] {
      emit(cmd_compare(common, run_a, run_b, scheme), common, out);
      return kExitOk;
    };
  });

  // census
  std::size_t census_levels = 20;
  auto* census = app.add_subcommand("census", "Tie rates, ties by recall level and the decisive-level ECDF");
  add_input_options(census, common);
  census->add_option("--max-level", census_levels, "Deepest recall level in the by-level table")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_output_options(census, common);
  census->footer(kFormatsHelp);
  census->callback([&] {
    action = [&] {
      emit(cmd_census(common, census_levels), common, out);
      return kExitOk;
    };
  });

  // agreement
  experiments::ExperimentConfig cfg;
  std::string mode = "both";
  auto* agreement = app.add_subcommand(
      "agreement", "Masked-first-level agreement and agreement under label or query removal");
  add_input_options(agreement, common);
  agreement->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  agreement->add_option("--samples", cfg.n_samples, "Samples per removal fraction")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  agreement->add_option("--fractions", cfg.fractions, "Removal fractions in [0, 1)")
      ->delimiter(',')
      ->capture_default_str();
  agreement->add_option("--mode", mode, "labels, queries, both or none")
      ->check(CLI::IsMember({"labels", "queries", "both", "none"}))
      ->capture_default_str();
  agreement->add_flag("--stratified", cfg.stratified_labels,
                      "Remove the same fraction of labels within each topic");
  add_output_options(agreement, common);
  agreement->footer(kFormatsHelp);
  agreement->callback([&] {
    action = [&] {
      cfg.binarization_threshold = common.threshold;
      cfg.validate();
      emit(cmd_agreement(common, cfg, mode), common, out);
      return kExitOk;
    };
  });

  // degrade
  double fraction = 0.0;
  std::uint64_t degrade_seed = 0;
  std::string degrade_mode = "labels";
  bool stratified = false;
  auto* degrade = app.add_subcommand(
      "degrade", "Write qrels with relevant labels removed, or the surviving topic list");
  add_input_options(degrade, common, false);
  degrade->add_option("--fraction", fraction, "Fraction to remove, in [0, 1)")->required();
  degrade->add_option("--seed", degrade_seed, "Random seed")->capture_default_str();
  degrade->add_option("--mode", degrade_mode, "labels (qrels output) or queries (topic list)")
      ->check(CLI::IsMember({"labels", "queries"}))
      ->capture_default_str();
  degrade->add_flag("--stratified", stratified,
                    "Remove the same fraction of labels within each topic");
  degrade->add_option("--out", common.out, "Output file (default: stdout)");
  degrade->footer(kFormatsHelp);
  degrade->callback([&] {
    action = [&] {
      const auto judgments = load_qrels(common.qrels, common.threshold);
      std::ostringstream buffer;
      if (degrade_mode == "labels") {
        write_qrels(buffer, experiments::degrade_labels(judgments, fraction, degrade_seed,
                                                        stratified));
      } else {
        const auto topics = experiments::evaluable_topics(judgments);
        for (const auto& t : experiments::degrade_queries(topics, fraction, degrade_seed)) {
          buffer << t << '\n';
        }
      }
      if (common.out.empty()) {
        out << buffer.str();
      } else {
        std::ofstream file(common.out, std::ios::binary);
        if (!file) throw DataError("cannot write " + common.out);
        file << buffer.str();
      }
      return kExitOk;
    };
  });

  // significance
  std::string test = "both", sig_scheme = "all";
  double alpha = 0.05;
  auto* significance = app.add_subcommand(
      "significance", "Share of run pairs with significant differences (HSD and paired tests)");
  add_input_options(significance, common);
  significance->add_option("--test", test, "hsd, paired or both")
      ->check(CLI::IsMember({"hsd", "paired", "both"}))
      ->capture_default_str();
  significance->add_option("--scheme", sig_scheme, "rr, rrlp, sgnlp or all")
      ->capture_default_str();
  significance->add_option("--alpha", alpha, "Significance level")->capture_default_str();
  add_output_options(significance, common);
  significance->footer(kFormatsHelp);
  significance->callback([&] {
    action = [&] {
      emit(cmd_significance(common, test, sig_scheme, alpha), common, out);
      return kExitOk;
    };
  });

  // backoff
  experiments::BackoffConfig backoff_cfg;
  auto* backoff = app.add_subcommand(
      "backoff", "Correlations between recall-level differences and backoff regressions");
  add_input_options(backoff, common);
  backoff->add_option("--max-level", backoff_cfg.max_level, "Deepest recall level")
      ->capture_default_str();
  backoff->add_option("--horizon", backoff_cfg.horizon,
                      "Deeper levels used as predictors of each target level")
      ->capture_default_str();
  backoff->add_option("--targets", backoff_cfg.targets, "Target levels 1..N to regress")
      ->capture_default_str();
  add_output_options(backoff, common);
  backoff->footer(kFormatsHelp);
  backoff->callback([&] {
    action = [&] {
      emit(cmd_backoff(common, backoff_cfg), common, out);
      return kExitOk;
    };
  });

  // theory
  TheoryArgs targs;
  auto* th = app.add_subcommand("theory", "Closed-form tie probabilities, value counts and oracle checks");
  th->add_flag("--tie-prob", targs.tie_prob, "P(tie | r1) for r1 in [1, D-R+1]");
  th->add_flag("--value-ratio", targs.value_ratio, "C(D, R+k) / C(D, R) for k in [0, max-k]");
  th->add_flag("--check", targs.check,
               "Verify closed forms against exhaustive enumeration for all D <= --corpus, "
               "R <= --relevant; exits 2 on any failure");
  th->add_option("--corpus", targs.corpus, "Corpus size D")->required();
  th->add_option("--relevant", targs.relevant, "Relevant documents R")->required();
  th->add_option("--max-k", targs.max_k, "Largest k for --value-ratio (default D-R)");
  add_output_options(th, common);
  th->footer(kFormatsHelp);
  th->callback([&] {
    action = [&] {
      bool ok = true;
      emit(cmd_theory(targs, ok), common, out);
      if (!ok) {
        err << "lexiprec: theory check failed\n";
        return kExitData;
      }
      return kExitOk;
    };
  });

  // synth
  SynthParams sp;
  std::string out_dir;
  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic qrels file and runs");
  synth->add_option("--topics", sp.n_topics, "Number of topics")->capture_default_str();
  synth->add_option("--relevant", sp.relevant_per_topic, "Relevant documents per topic")
      ->capture_default_str();
  synth->add_option("--depth", sp.depth, "Documents retrieved per topic")->capture_default_str();
  synth->add_option("--corpus", sp.corpus, "Documents per topic (0 = depth)")
      ->capture_default_str();
  synth->add_option("--n-runs", sp.n_runs, "Number of runs")->capture_default_str();
  synth->add_option("--quality", sp.quality,
                    "Strength of the best run in [0, 1]; run j gets quality*(j+1)/n")
      ->capture_default_str();
  synth->add_option("--boost", sp.relevance_boost,
                    "Relevant-document weight is 1 + boost * run quality")
      ->capture_default_str();
  synth->add_option("--seed", sp.seed, "Random seed")->capture_default_str();
  synth->add_option("--out-dir", out_dir,
                    "Directory for qrels.txt and runs/<tag>.run")->required();
  synth->footer(kFormatsHelp);
  synth->callback([&] {
    action = [&] {
      const auto data = synth_generate(sp);
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir / "runs");
      std::ofstream q(dir / "qrels.txt", std::ios::binary);
      if (!q) throw DataError("cannot write " + (dir / "qrels.txt").string());
      write_qrels(q, data.judgments);
      for (const auto& run : data.runs) {
        const auto path = dir / "runs" / (run.tag() + ".run");
        std::ofstream f(path, std::ios::binary);
        if (!f) throw DataError("cannot write " + path.string());
        write_run(f, run);
      }
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const CLI::Error& e) {
    err << "lexiprec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "lexiprec: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "lexiprec: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace lexiprec::cli

#endif  // LEXIPREC_CLI_HPP_
