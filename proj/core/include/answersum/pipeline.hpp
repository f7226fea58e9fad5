#pragma once

// Query-focused answer summarisation: usefulness pre-selection, centrality
// ranking, then redundancy-aware greedy selection.

#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "answersum/centrality.hpp"
#include "answersum/corpus.hpp"
#include "answersum/error.hpp"
#include "answersum/redundancy.hpp"
#include "answersum/scoring.hpp"

namespace answersum {

enum class AblationMode {
  kUsefulness,            // stage 1 only
  kUsefulnessCentrality,  // stages 1 and 2
  kFull,
};

const char* to_string(AblationMode m) noexcept;
// Accepts "stage1", "stage12", "full". Throws InvalidArgument otherwise.
AblationMode parse_ablation_mode(std::string_view s);

// Builds the embedder for one summarisation call from all candidate
// sentences of the unit. Lets corpus-fitted embedders such as TF-IDF see the
// whole unit; fixed embedders ignore the argument.
using EmbedderFactory =
    std::function<std::shared_ptr<const SentenceEmbedder>(std::span<const AnswerSentence> candidates)>;

EmbedderFactory fixed_embedder(std::shared_ptr<const SentenceEmbedder> embedder);
EmbedderFactory tfidf_per_unit();

// The numeric half of the configuration, echoed into every result and report.
struct PipelineSettings {
  int top_k = 30;
  TextRankConfig textrank;
  RedundancyConfig redundancy;
  AblationMode mode = AblationMode::kFull;

  void validate() const;
};

struct PipelineConfig {
  PipelineSettings settings;
  std::shared_ptr<const UsefulnessScorer> usefulness_scorer;
  EmbedderFactory embedder;

  // Lexical usefulness with per-unit TF-IDF embeddings.
  static PipelineConfig baseline(PipelineSettings settings = {});
};

enum class PipelineStage { kUsefulness, kCentrality, kRedundancy };
const char* to_string(PipelineStage s) noexcept;

// A stage failed. cause() holds the original exception.
class PipelineError : public Error {
 public:
  PipelineError(PipelineStage stage, const std::string& what, std::exception_ptr cause = nullptr);

  PipelineStage stage() const noexcept { return stage_; }
  std::exception_ptr cause() const noexcept { return cause_; }
  // True when the cause is a ProtocolError or TransportError.
  bool scorer_failure() const noexcept { return scorer_failure_; }

 private:
  PipelineStage stage_;
  std::exception_ptr cause_;
  bool scorer_failure_ = false;
};

enum class TraceDecision { kBelowTopK, kSelected, kRedundant, kOverBudget };
const char* to_string(TraceDecision d) noexcept;

struct SentenceTrace {
  SentenceId id;
  double usefulness = 0.0;
  int usefulness_rank = 0;                // 1-based
  std::optional<double> centrality;       // set for sentences that reached stage 2
  std::optional<int> centrality_rank;     // 1-based
  TraceDecision decision = TraceDecision::kBelowTopK;
  std::optional<double> max_similarity;   // stage 3 only
  std::optional<SentenceId> most_similar_to;
};

struct SummaryResult {
  TechnicalQuery query;
  std::vector<AnswerSentence> sentences;
  std::vector<SentenceTrace> trace;  // input order
  PipelineSettings settings;
  int textrank_iterations = 0;
  bool textrank_converged = true;
};

// Throws InvalidArgument for an empty unit and PipelineError when a scorer or
// embedder fails.
SummaryResult summarize(const TechnicalQuery& query, const AnnotationUnit& unit, const PipelineConfig& config);
SummaryResult summarize_sentences(const TechnicalQuery& query, std::span<const AnswerSentence> sentences,
                                  const PipelineConfig& config);

struct BenchmarkOutcome {
  std::optional<SummaryResult> result;
  std::string error;  // empty on success
  bool scorer_failure = false;

  bool ok() const noexcept { return result.has_value(); }
};

// Positionally aligned with entries. One failing entry never aborts the batch.
// jobs > 1 summarises entries on that many threads; output order is entry order.
std::vector<BenchmarkOutcome> summarize_benchmark(std::span<const BenchmarkEntry> entries,
                                                  const PipelineConfig& config, int jobs = 1);

std::string summary_to_json(const SummaryResult& result);

}  // namespace answersum
