#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "answersum/centrality.hpp"
#include "answersum/error.hpp"
#include "answersum/text.hpp"
#include "oracles.hpp"

using namespace answersum;
using Strings = std::vector<std::string>;
using answersum::testing::asymmetric_five;
using answersum::testing::power_iteration;

namespace {

std::vector<AnswerSentence> nodes(std::size_t n) {
  std::vector<AnswerSentence> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({SentenceId(0, static_cast<int>(i) + 1), "s" + std::to_string(i)});
  return out;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& w) {
  std::vector<double> out;
  for (const auto& row : w) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace

TEST(EdgeWeight, SpecExamples) {
  EXPECT_DOUBLE_EQ(edge_weight(Strings{"a", "b"}, Strings{"c", "d"}), 0.0);
  EXPECT_NEAR(edge_weight(Strings{"a", "b", "c", "d"}, Strings{"a", "b", "x", "y"}), 2.0 / (2.0 * std::log(4.0)),
              1e-12);
  EXPECT_NEAR(edge_weight(Strings{"a", "b", "c", "d"}, Strings{"a", "b", "x", "y"}), 0.7213, 1e-4);
  EXPECT_DOUBLE_EQ(edge_weight(Strings{"a"}, Strings{"a"}), 0.0);
  EXPECT_DOUBLE_EQ(edge_weight(Strings{}, Strings{"a"}), 0.0);
}

TEST(EdgeWeight, CountsDistinctSharedButAllOccurrencesInLengths) {
  // Shared distinct {a}; lengths 3 and 2.
  EXPECT_NEAR(edge_weight(Strings{"a", "a", "b"}, Strings{"a", "c"}), 1.0 / (std::log(3.0) + std::log(2.0)), 1e-12);
  EXPECT_DOUBLE_EQ(edge_weight(Strings{"a", "b"}, Strings{"b", "a"}), edge_weight(Strings{"b", "a"}, Strings{"a", "b"}));
}

TEST(SentenceGraph, ValidatesMatrix) {
  EXPECT_THROW(SentenceGraph(nodes(2), {0, 1, 2, 0}), InvalidArgument);
  EXPECT_THROW(SentenceGraph(nodes(2), {1, 1, 1, 0}), InvalidArgument);
  EXPECT_THROW(SentenceGraph(nodes(2), {0, -1, -1, 0}), InvalidArgument);
  EXPECT_THROW(SentenceGraph(nodes(2), {0, 1, 1}), InvalidArgument);
  EXPECT_THROW(SentenceGraph(nodes(2), {0, INFINITY, INFINITY, 0}), InvalidArgument);
  EXPECT_NO_THROW(SentenceGraph(nodes(2), {0, 1, 1, 0}));
  EXPECT_THROW(SentenceGraph(nodes(2), {0, 1, 1, 0}).scaled(0.0), InvalidArgument);
}

TEST(BuildGraph, SingleSentenceAndIdenticalSentences) {
  const std::vector<AnswerSentence> one = {{SentenceId(0, 1), "only one here"}};
  const auto g1 = build_graph(one);
  ASSERT_EQ(g1.size(), 1u);
  EXPECT_DOUBLE_EQ(g1.weight(0, 0), 0.0);

  std::vector<AnswerSentence> same;
  for (int i = 1; i <= 3; ++i) same.push_back({SentenceId(0, i), "sort the list quickly"});
  const auto g = build_graph(same);
  const double w = g.weight(0, 1);
  EXPECT_NEAR(w, 4.0 / (2.0 * std::log(4.0)), 1e-12);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(g.weight(i, j), i == j ? 0.0 : w);
}

// Hand-computed: tokens are {the,cat,sat} / {the,dog,sat,down} / {a,cat}.
TEST(BuildGraph, MatchesHandComputedWeights) {
  const std::vector<AnswerSentence> s = {
      {SentenceId(0, 1), "The cat sat."}, {SentenceId(0, 2), "The dog sat down."}, {SentenceId(1, 1), "A cat!"}};
  const auto g = build_graph(s);
  EXPECT_NEAR(g.weight(0, 1), 2.0 / (std::log(3.0) + std::log(4.0)), 1e-12);
  EXPECT_NEAR(g.weight(0, 2), 1.0 / (std::log(3.0) + std::log(2.0)), 1e-12);
  EXPECT_DOUBLE_EQ(g.weight(1, 2), 0.0);
  EXPECT_DOUBLE_EQ(g.weight(2, 1), 0.0);
}

TEST(TextRank, CompleteSymmetricGraphIsUniform) {
  const SentenceGraph g(nodes(3), {0, 1, 1, 1, 0, 1, 1, 1, 0});
  const auto r = textrank(g);
  EXPECT_TRUE(r.converged);
  for (const auto& s : r.ranked) EXPECT_NEAR(s.score, 1.0, 1e-4);
  // Ties are broken by id.
  EXPECT_EQ(r.ranked[0].sentence.id, SentenceId(0, 1));
  EXPECT_EQ(r.ranked[2].sentence.id, SentenceId(0, 3));
}

TEST(TextRank, IsolatedNodeGetsOneMinusDamping) {
  const SentenceGraph g(nodes(3), {0, 1, 0, 1, 0, 0, 0, 0, 0});
  const auto r = textrank(g);
  const auto it = std::find_if(r.ranked.begin(), r.ranked.end(),
                               [](const auto& s) { return s.sentence.id == SentenceId(0, 3); });
  ASSERT_NE(it, r.ranked.end());
  EXPECT_NEAR(it->score, 0.15, 1e-9);
}

TEST(TextRank, AsymmetricThreeNodeMatchesOracle) {
  const std::vector<std::vector<double>> w = {{0, 3, 1}, {3, 0, 0}, {1, 0, 0}};
  const auto oracle = power_iteration(w, 0.85, 10000);
  TextRankConfig cfg;
  cfg.convergence_threshold = 1e-12;
  const auto r = textrank(SentenceGraph(nodes(3), flatten(w)), cfg);
  ASSERT_TRUE(r.converged);
  for (const auto& s : r.ranked) EXPECT_NEAR(s.score, oracle[s.sentence.sentence_index() - 1], 1e-9);
  EXPECT_EQ(r.ranked[0].sentence.id, SentenceId(0, 1));
}

TEST(TextRank, FiveNodeRankingMatchesOracle) {
  const auto w = asymmetric_five();
  const auto oracle = power_iteration(w, 0.85, 10000);
  std::vector<int> expected(5);
  std::iota(expected.begin(), expected.end(), 1);
  std::sort(expected.begin(), expected.end(), [&](int a, int b) {
    return oracle[a - 1] != oracle[b - 1] ? oracle[a - 1] > oracle[b - 1] : a < b;
  });

  const auto r = textrank(SentenceGraph(nodes(5), flatten(w)));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 200);
  std::vector<int> got;
  for (const auto& s : r.ranked) got.push_back(s.sentence.sentence_index());
  EXPECT_EQ(got, expected);
}

TEST(TextRank, ScoresStayInBounds) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 9;
    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) w[i * n + j] = w[j * n + i] = u(rng) < 0.4 ? 0.0 : u(rng);
    const auto r = textrank(SentenceGraph(nodes(n), w));
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 200);
    for (const auto& s : r.ranked) {
      EXPECT_GE(s.score, 0.15 - 1e-12);
      EXPECT_LE(s.score, static_cast<double>(n));
    }
  }
}

TEST(TextRank, ScalingWeightsDoesNotChangeScores) {
  const SentenceGraph g(nodes(5), flatten(asymmetric_five()));
  const auto a = textrank(g);
  const auto b = textrank(g.scaled(7.3));
  ASSERT_EQ(a.ranked.size(), b.ranked.size());
  for (std::size_t i = 0; i < a.ranked.size(); ++i) {
    EXPECT_EQ(a.ranked[i].sentence.id, b.ranked[i].sentence.id);
    EXPECT_NEAR(a.ranked[i].score, b.ranked[i].score, 1e-9);
  }
}

TEST(TextRank, SmallDampingTendsToUniform) {
  TextRankConfig cfg;
  cfg.damping = 1e-6;
  const auto r = textrank(SentenceGraph(nodes(5), flatten(asymmetric_five())), cfg);
  for (const auto& s : r.ranked) EXPECT_NEAR(s.score, 1.0, 1e-5);
}

TEST(TextRank, NonConvergenceIsFlagged) {
  TextRankConfig cfg;
  cfg.max_iterations = 1;
  const auto r = textrank(SentenceGraph(nodes(5), flatten(asymmetric_five())), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.ranked.size(), 5u);
}

TEST(TextRankConfig, Validates) {
  TextRankConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.damping = 1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.convergence_threshold = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(RankByCentrality, SingleSentence) {
  const std::vector<AnswerSentence> one = {{SentenceId(2, 1), "Lonely sentence."}};
  const auto r = rank_by_centrality(one);
  ASSERT_EQ(r.ranked.size(), 1u);
  EXPECT_NEAR(r.ranked[0].score, 0.15, 1e-12);
  EXPECT_THROW(rank_by_centrality(std::vector<AnswerSentence>{}), InvalidArgument);
}

TEST(RankByCentrality, PermutationInvariant) {
  std::vector<AnswerSentence> s = {{SentenceId(0, 1), "Use a HashMap to count words."},
                                   {SentenceId(0, 2), "A TreeMap keeps the words sorted."},
                                   {SentenceId(1, 1), "Count words with a HashMap and merge."},
                                   {SentenceId(2, 1), "Streams can count words too."},
                                   {SentenceId(2, 2), "Nothing in common here!"}};
  const auto base = rank_by_centrality(s);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    std::shuffle(s.begin(), s.end(), rng);
    EXPECT_EQ(rank_by_centrality(s).ranked, base.ranked);
  }
}

TEST(SortByScore, DescendingThenIdAscending) {
  std::vector<ScoredSentence> v = {{{SentenceId(1, 1), "a"}, 0.5},
                                   {{SentenceId(0, 2), "b"}, 0.5},
                                   {{SentenceId(3, 1), "c"}, 0.9},
                                   {{SentenceId(100, 1), "d"}, 0.5},
                                   {{SentenceId(99, 1), "e"}, 0.5}};
  sort_by_score(v);
  std::vector<std::string> ids;
  for (const auto& s : v) ids.push_back(s.sentence.id.str());
  EXPECT_EQ(ids, (Strings{"#03_01", "#00_02", "#01_01", "#99_01", "#100_01"}));
}
