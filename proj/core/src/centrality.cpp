#include "answersum/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "answersum/error.hpp"
#include "answersum/text.hpp"

namespace answersum {

void TextRankConfig::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) throw InvalidArgument("damping must lie in (0, 1)");
  if (!(convergence_threshold > 0.0)) throw InvalidArgument("convergence threshold must be positive");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
}

SentenceGraph::SentenceGraph(std::vector<AnswerSentence> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  const std::size_t n = nodes_.size();
  if (weights_.size() != n * n) throw InvalidArgument("weight matrix size does not match node count");
  for (std::size_t i = 0; i < n; ++i) {
    if (weights_[i * n + i] != 0.0) throw InvalidArgument("sentence graph has a self-loop");
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights_[i * n + j];
      if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("edge weights must be finite and non-negative");
      if (w != weights_[j * n + i]) throw InvalidArgument("edge weights must be symmetric");
    }
  }
}

SentenceGraph SentenceGraph::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidArgument("scale factor must be positive");
  auto w = weights_;
  for (auto& x : w) x *= factor;
  return SentenceGraph(nodes_, std::move(w));
}

double edge_weight(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0.0;
  const double denom = std::log(static_cast<double>(a.size())) + std::log(static_cast<double>(b.size()));
  if (denom <= 0.0) return 0.0;
  const std::set<std::string_view> left(a.begin(), a.end());
  const std::set<std::string_view> right(b.begin(), b.end());
  std::size_t shared = 0;
  for (const auto& t : left) shared += right.count(t);
  return shared == 0 ? 0.0 : static_cast<double>(shared) / denom;
}

SentenceGraph build_graph(std::span<const AnswerSentence> sentences) {
  const std::size_t n = sentences.size();
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(n);
  for (const auto& s : sentences) tokens.push_back(text::tokenize(s.text));

  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      w[i * n + j] = w[j * n + i] = edge_weight(tokens[i], tokens[j]);
    }
  }
  return SentenceGraph({sentences.begin(), sentences.end()}, std::move(w));
}

void sort_by_score(std::vector<ScoredSentence>& items) {
  std::stable_sort(items.begin(), items.end(), [](const ScoredSentence& a, const ScoredSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.sentence.id < b.sentence.id;
  });
}

TextRankResult textrank(const SentenceGraph& graph, const TextRankConfig& config) {
  config.validate();
  const std::size_t n = graph.size();
  const double d = config.damping;

  std::vector<double> out_weight(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) out_weight[j] += graph.weight(j, k);
  }

  std::vector<double> rank(n, 1.0);
  std::vector<double> next(n, 0.0);
  TextRankResult result;
  while (result.iterations < config.max_iterations) {
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double w = graph.weight(j, i);
        if (w > 0.0) sum += w / out_weight[j] * rank[j];
      }
      next[i] = (1.0 - d) + d * sum;
      delta = std::max(delta, std::abs(next[i] - rank[i]));
    }
    rank.swap(next);
    ++result.iterations;
    if (delta < config.convergence_threshold) {
      result.converged = true;
      break;
    }
  }

  result.ranked.reserve(n);
  for (std::size_t i = 0; i < n; ++i) result.ranked.push_back({graph.nodes()[i], rank[i]});
  sort_by_score(result.ranked);
  return result;
}

TextRankResult rank_by_centrality(std::span<const AnswerSentence> sentences, const TextRankConfig& config) {
  if (sentences.empty()) throw InvalidArgument("centrality ranking needs at least one sentence");
  // Canonical node order makes the floating-point sums, and so the ranking,
  // independent of input order.
  std::vector<AnswerSentence> ordered(sentences.begin(), sentences.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return textrank(build_graph(ordered), config);
}

}  // namespace answersum
