#pragma once

// TextRank over a sentence graph whose edges weigh lexical overlap.

#include <span>
#include <string>
#include <vector>

#include "answersum/corpus.hpp"

namespace answersum {

struct ScoredSentence {
  AnswerSentence sentence;
  double score = 0.0;

  friend bool operator==(const ScoredSentence&, const ScoredSentence&) = default;
};

struct TextRankConfig {
  double damping = 0.85;
  double convergence_threshold = 1e-4;
  int max_iterations = 1000;

  // Throws InvalidArgument unless damping in (0, 1), threshold > 0 and
  // max_iterations >= 1.
  void validate() const;
};

// Dense symmetric weight matrix, zero diagonal, row-major.
class SentenceGraph {
 public:
  // Throws InvalidArgument if weights are not n*n, asymmetric, negative,
  // non-finite or carry a non-zero diagonal.
  SentenceGraph(std::vector<AnswerSentence> nodes, std::vector<double> weights);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<AnswerSentence>& nodes() const noexcept { return nodes_; }
  double weight(std::size_t i, std::size_t j) const noexcept { return weights_[i * nodes_.size() + j]; }
  std::span<const double> weights() const noexcept { return weights_; }

  // Copy with every weight multiplied by factor > 0.
  SentenceGraph scaled(double factor) const;

 private:
  std::vector<AnswerSentence> nodes_;
  std::vector<double> weights_;
};

// Distinct shared tokens over ln|a| + ln|b|, where |x| counts tokens with
// repetition. Zero when nothing is shared or the denominator is not positive.
double edge_weight(std::span<const std::string> a, std::span<const std::string> b);

SentenceGraph build_graph(std::span<const AnswerSentence> sentences);

struct TextRankResult {
  std::vector<ScoredSentence> ranked;  // by score descending, then id ascending
  int iterations = 0;
  bool converged = false;
};

// Synchronous weighted PageRank from R = 1:
//   R_i <- (1 - d) + d * sum_j w_ji / (sum_k w_jk) * R_j
// until max_i |dR_i| < threshold or max_iterations. Nodes without edges end
// at 1 - d.
TextRankResult textrank(const SentenceGraph& graph, const TextRankConfig& config = {});

// Throws InvalidArgument for an empty input.
TextRankResult rank_by_centrality(std::span<const AnswerSentence> sentences, const TextRankConfig& config = {});

// Sort helper shared by every stage: score descending, id ascending.
void sort_by_score(std::vector<ScoredSentence>& items);

}  // namespace answersum
