#include <gtest/gtest.h>

#include <random>

#include "answersum/error.hpp"
#include "answersum/rouge.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace answersum;
using answersum::testing::data_path;
using answersum::testing::Tokens;

namespace {

Tokens words(const std::string& s) { return rouge_tokens(s); }
double f1(double r, double p) { return answersum::testing::f1_of(r, p); }

}  // namespace

TEST(RougeN, SpecExamples) {
  const std::vector<Tokens> ref = {words("the cat sat on the mat")};
  const auto c = words("the cat sat");
  EXPECT_DOUBLE_EQ(rouge_n(c, ref, 1).recall, 0.5);
  EXPECT_DOUBLE_EQ(rouge_n(c, ref, 2).recall, 0.4);
  EXPECT_DOUBLE_EQ(rouge_n(c, ref, 1).precision, 1.0);

  const auto same = rouge_n(ref[0], ref, 2);
  EXPECT_DOUBLE_EQ(same.recall, 1.0);
  EXPECT_DOUBLE_EQ(same.precision, 1.0);
  EXPECT_DOUBLE_EQ(same.f1, 1.0);

  const auto empty = rouge_n(Tokens{}, ref, 1);
  EXPECT_DOUBLE_EQ(empty.recall, 0.0);
  EXPECT_DOUBLE_EQ(empty.precision, 0.0);
  EXPECT_DOUBLE_EQ(empty.f1, 0.0);
}

TEST(RougeN, ClipsRepeatedGrams) {
  const std::vector<Tokens> ref = {words("the cat")};
  const auto s = rouge_n(words("the the the"), ref, 1);
  EXPECT_DOUBLE_EQ(s.recall, 0.5);
  EXPECT_DOUBLE_EQ(s.precision, 1.0 / 3.0);
}

TEST(RougeN, LongNIsZeroNotError) {
  const std::vector<Tokens> ref = {words("a b")};
  const auto s = rouge_n(words("a b"), ref, 3);
  EXPECT_DOUBLE_EQ(s.f1, 0.0);
  EXPECT_THROW(rouge_n(words("a"), ref, 0), InvalidArgument);
  EXPECT_THROW(rouge_n(words("a"), std::vector<Tokens>{}, 1), InvalidArgument);
}

TEST(RougeN, MeanOverReferences) {
  const std::vector<Tokens> refs = {words("a b"), words("c d")};
  const auto s = rouge_n(words("a b"), refs, 1);
  EXPECT_DOUBLE_EQ(s.recall, 0.5);
  EXPECT_DOUBLE_EQ(s.precision, 0.5);
  EXPECT_DOUBLE_EQ(s.f1, 0.5);
}

TEST(RougeL, SpecExamples) {
  const std::vector<Tokens> ref = {words("a b c d")};
  const auto s = rouge_l(words("a b d"), ref);
  EXPECT_DOUBLE_EQ(s.recall, 0.75);
  EXPECT_DOUBLE_EQ(s.precision, 1.0);
  EXPECT_NEAR(s.f1, 0.8571, 1e-4);
  EXPECT_NEAR(s.f1, 6.0 / 7.0, 1e-12);
  EXPECT_DOUBLE_EQ(rouge_l(ref[0], ref).f1, 1.0);
  EXPECT_DOUBLE_EQ(rouge_l(words("x y z"), ref).f1, 0.0);
  EXPECT_DOUBLE_EQ(rouge_l(Tokens{}, ref).f1, 0.0);
}

TEST(Rouge, RandomPairsMatchBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    auto random_tokens = [&] {
      Tokens t(rng() % 21);
      for (auto& x : t) x = std::string(1, static_cast<char>('a' + rng() % 10));
      return t;
    };
    const Tokens cand = random_tokens();
    std::vector<Tokens> refs(1 + rng() % 3);
    for (auto& r : refs) r = random_tokens();

    for (int n : {1, 2}) {
      const auto want = answersum::testing::brute_rouge_n(cand, refs, n);
      const auto got = rouge_n(cand, refs, n);
      ASSERT_NEAR(got.recall, want.recall, 1e-9);
      ASSERT_NEAR(got.precision, want.precision, 1e-9);
      ASSERT_NEAR(got.f1, want.f1, 1e-9);
    }
    for (const auto& ref : refs) {
      ASSERT_EQ(lcs_length(cand, ref), answersum::testing::brute_lcs(cand, ref));
      ASSERT_LE(lcs_length(cand, ref), std::min(cand.size(), ref.size()));
    }
    const auto want = answersum::testing::brute_rouge_l(cand, refs);
    const auto got = rouge_l(cand, refs);
    ASSERT_NEAR(got.recall, want.recall, 1e-9);
    ASSERT_NEAR(got.precision, want.precision, 1e-9);
    ASSERT_NEAR(got.f1, want.f1, 1e-9);
    ASSERT_LE(got.f1, 1.0);
  }
}

TEST(Rouge, SentenceBoundariesDoNotMatter) {
  const std::vector<std::string> split = {"The cat sat.", "On the mat!"};
  const std::vector<std::string> joined = {"the cat sat on the mat"};
  EXPECT_EQ(rouge_tokens(split), rouge_tokens(joined));
}

TEST(RougeTokens, LowercaseNoStemming) {
  EXPECT_EQ(rouge_tokens("Running `x.sort()`, RUNS!"), (Tokens{"running", "x", "sort", "runs"}));
}

namespace {

BenchmarkEntry entry(const std::string& query, const std::vector<std::string>& reference) {
  BenchmarkEntry e;
  e.query = TechnicalQuery::make(query);
  e.references = {reference};
  for (std::size_t i = 0; i < reference.size(); ++i)
    e.candidates.push_back({SentenceId(0, static_cast<int>(i) + 1), reference[i]});
  return e;
}

SummaryResult summary_of(const std::vector<std::string>& sentences) {
  SummaryResult r;
  r.query = TechnicalQuery::make("q");
  for (std::size_t i = 0; i < sentences.size(); ++i)
    r.sentences.push_back({SentenceId(0, static_cast<int>(i) + 1), sentences[i]});
  return r;
}

}  // namespace

TEST(EvaluateBenchmark, PerfectSummariesScoreOne) {
  const std::vector<std::string> ref = {"one a", "two b", "three c", "four d", "five e"};
  const std::vector<BenchmarkEntry> entries = {entry("q1", ref), entry("q2", ref)};
  const std::vector<SummaryResult> results = {summary_of(ref), summary_of(ref)};
  const auto report = evaluate_benchmark(results, entries, "full");
  EXPECT_DOUBLE_EQ(report.aggregate.rouge1.f1, 1.0);
  EXPECT_DOUBLE_EQ(report.aggregate.rouge2.f1, 1.0);
  EXPECT_DOUBLE_EQ(report.aggregate.rougeL.f1, 1.0);
  EXPECT_EQ(report.per_query[1].query_id, "q002");
}

TEST(EvaluateBenchmark, AggregateIsArithmeticMean) {
  // Candidate "a b" against reference "a b c d e": R = 0.4, P = 1.
  // Candidate "a b c" against "a b c d e": R = 0.6, P = 1.
  const std::vector<std::string> ref = {"a", "b", "c", "d", "e"};
  const std::vector<BenchmarkEntry> entries = {entry("q1", ref), entry("q2", ref)};
  const std::vector<SummaryResult> results = {summary_of({"a b"}), summary_of({"a b c"})};
  const auto report = evaluate_benchmark(results, entries, "sys");
  EXPECT_NEAR(report.aggregate.rouge1.recall, 0.5, 1e-12);
  EXPECT_NEAR(report.aggregate.rouge1.f1, (f1(0.4, 1) + f1(0.6, 1)) / 2, 1e-12);
  EXPECT_THROW(evaluate_benchmark(std::span<const SummaryResult>(results).first(1), entries, "sys"),
               InvalidArgument);
}

TEST(EvaluateOutcomes, FailedEntriesScoreZeroAndAreFlagged) {
  const std::vector<std::string> ref = {"a", "b", "c", "d", "e"};
  const std::vector<BenchmarkEntry> entries = {entry("q1", ref), entry("q2", ref)};
  std::vector<BenchmarkOutcome> outcomes(2);
  outcomes[0].result = summary_of(ref);
  outcomes[1].error = "usefulness stage failed";
  const auto report = evaluate_outcomes(outcomes, entries, PipelineSettings{}, "full");
  EXPECT_FALSE(report.per_query[0].failed);
  EXPECT_TRUE(report.per_query[1].failed);
  EXPECT_DOUBLE_EQ(report.per_query[1].scores.rouge1.f1, 0.0);
  EXPECT_DOUBLE_EQ(report.aggregate.rouge1.f1, 0.5);
}

TEST(Report, JsonAndTable) {
  const auto entries = load_benchmark(data_path("mini_benchmark.json"));
  const auto outcomes = summarize_benchmark(entries, PipelineConfig::baseline());
  const auto report = evaluate_outcomes(outcomes, entries, PipelineSettings{}, "full");
  const auto doc = nlohmann::json::parse(report_to_json(report));
  EXPECT_EQ(doc.at("per_query").size(), 3u);
  EXPECT_EQ(doc.at("config").at("top_k"), 30);
  EXPECT_EQ(doc.at("config").at("redundancy_threshold"), 0.8);
  EXPECT_NEAR(doc.at("aggregate").at("rouge1").at("f1").get<double>(), report.aggregate.rouge1.f1, 1e-15);

  const auto table = report_to_table(report);
  EXPECT_NE(table.find("ROUGE-1"), std::string::npos);
  EXPECT_NE(table.find("ROUGE-L"), std::string::npos);
  EXPECT_NE(table.find("full (R)"), std::string::npos);
  EXPECT_NE(table.find("full (P)"), std::string::npos);
  EXPECT_NE(table.find("full (F1)"), std::string::npos);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 4);
}
