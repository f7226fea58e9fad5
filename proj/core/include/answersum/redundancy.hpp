#pragma once

// Greedy redundancy removal over a centrality-ranked list.

#include <optional>
#include <span>
#include <vector>

#include "answersum/corpus.hpp"
#include "answersum/scoring.hpp"

namespace answersum {

struct RedundancyConfig {
  double threshold = 0.8;  // discard when similarity is strictly above this
  int budget = 5;

  void validate() const;
};

struct RankedEmbedding {
  AnswerSentence sentence;
  SentenceEmbedding embedding;
};

// True iff some selected vector has cosine similarity > threshold with the
// candidate. Empty selection is never redundant.
bool is_redundant(const SentenceEmbedding& candidate, std::span<const SentenceEmbedding> selected, double threshold);

enum class SelectionDecision { kSelected, kRedundant, kOverBudget };

struct SelectionStep {
  SentenceId id;
  SelectionDecision decision = SelectionDecision::kSelected;
  // Highest similarity against the sentences selected before this one, and
  // which of them it was. Absent for the first candidate.
  std::optional<double> max_similarity;
  std::optional<SentenceId> most_similar_to;
};

struct SelectionResult {
  std::vector<AnswerSentence> summary;  // selection order, at most budget
  std::vector<SelectionStep> steps;     // one per input, in input order
};

// Scans the whole ranking: the first sentence is always kept, each later one
// is kept iff it is not redundant against everything kept so far. The
// summary is the first `budget` kept sentences.
SelectionResult greedy_select_traced(std::span<const RankedEmbedding> ranked, const RedundancyConfig& config = {});

std::vector<AnswerSentence> greedy_select(std::span<const RankedEmbedding> ranked, const RedundancyConfig& config = {});

const char* to_string(SelectionDecision d) noexcept;

}  // namespace answersum
