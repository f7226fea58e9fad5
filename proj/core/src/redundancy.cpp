#include "answersum/redundancy.hpp"

#include "answersum/error.hpp"

namespace answersum {

void RedundancyConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("redundancy threshold must lie in (0, 1]");
  if (budget < 1) throw InvalidArgument("summary budget must be at least 1");
}

bool is_redundant(const SentenceEmbedding& candidate, std::span<const SentenceEmbedding> selected, double threshold) {
  for (const auto& s : selected) {
    if (cosine_similarity(candidate, s) > threshold) return true;
  }
  return false;
}

SelectionResult greedy_select_traced(std::span<const RankedEmbedding> ranked, const RedundancyConfig& config) {
  config.validate();
  SelectionResult result;
  std::vector<const RankedEmbedding*> kept;

  for (const auto& item : ranked) {
    SelectionStep step;
    step.id = item.sentence.id;
    double best = -2.0;
    for (const auto* k : kept) {
      const double sim = cosine_similarity(item.embedding, k->embedding);
      if (sim > best) {
        best = sim;
        step.most_similar_to = k->sentence.id;
      }
    }
    if (!kept.empty()) step.max_similarity = best;

    if (step.max_similarity && *step.max_similarity > config.threshold) {
      step.decision = SelectionDecision::kRedundant;
    } else {
      kept.push_back(&item);
      step.decision = static_cast<int>(kept.size()) <= config.budget ? SelectionDecision::kSelected
                                                                      : SelectionDecision::kOverBudget;
      if (step.decision == SelectionDecision::kSelected) result.summary.push_back(item.sentence);
    }
    result.steps.push_back(std::move(step));
  }
  return result;
}

std::vector<AnswerSentence> greedy_select(std::span<const RankedEmbedding> ranked, const RedundancyConfig& config) {
  return greedy_select_traced(ranked, config).summary;
}

const char* to_string(SelectionDecision d) noexcept {
  switch (d) {
    case SelectionDecision::kSelected:
      return "selected";
    case SelectionDecision::kRedundant:
      return "redundant";
    case SelectionDecision::kOverBudget:
      return "over_budget";
  }
  return "unknown";
}

}  // namespace answersum
