#include "answersum/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "json_util.hpp"

namespace answersum {

using nlohmann::json;

const char* to_string(AblationMode m) noexcept {
  switch (m) {
    case AblationMode::kUsefulness:
      return "stage1";
    case AblationMode::kUsefulnessCentrality:
      return "stage12";
    case AblationMode::kFull:
      return "full";
  }
  return "unknown";
}

AblationMode parse_ablation_mode(std::string_view s) {
  if (s == "stage1") return AblationMode::kUsefulness;
  if (s == "stage12") return AblationMode::kUsefulnessCentrality;
  if (s == "full") return AblationMode::kFull;
  throw InvalidArgument("unknown ablation mode \"" + std::string(s) + "\" (expected stage1, stage12 or full)");
}

const char* to_string(PipelineStage s) noexcept {
  switch (s) {
    case PipelineStage::kUsefulness:
      return "usefulness";
    case PipelineStage::kCentrality:
      return "centrality";
    case PipelineStage::kRedundancy:
      return "redundancy";
  }
  return "unknown";
}

const char* to_string(TraceDecision d) noexcept {
  switch (d) {
    case TraceDecision::kBelowTopK:
      return "below_top_k";
    case TraceDecision::kSelected:
      return "selected";
    case TraceDecision::kRedundant:
      return "redundant";
    case TraceDecision::kOverBudget:
      return "over_budget";
  }
  return "unknown";
}

EmbedderFactory fixed_embedder(std::shared_ptr<const SentenceEmbedder> embedder) {
  return [embedder = std::move(embedder)](std::span<const AnswerSentence>) { return embedder; };
}

EmbedderFactory tfidf_per_unit() {
  return [](std::span<const AnswerSentence> candidates) -> std::shared_ptr<const SentenceEmbedder> {
    std::vector<std::string> corpus;
    corpus.reserve(candidates.size());
    for (const auto& s : candidates) corpus.push_back(s.text);
    return std::make_shared<TfidfEmbedder>(TfidfEmbedder::fit(corpus));
  };
}

void PipelineSettings::validate() const {
  textrank.validate();
  redundancy.validate();
  if (top_k < 1) throw InvalidArgument("top_k must be at least 1");
  if (top_k < redundancy.budget) throw InvalidArgument("top_k must not be smaller than the summary budget");
}

PipelineConfig PipelineConfig::baseline(PipelineSettings settings) {
  return PipelineConfig{settings, std::make_shared<LexicalUsefulnessScorer>(), tfidf_per_unit()};
}

PipelineError::PipelineError(PipelineStage stage, const std::string& what, std::exception_ptr cause)
    : Error(std::string(to_string(stage)) + " stage failed: " + what), stage_(stage), cause_(std::move(cause)) {
  if (cause_) {
    try {
      std::rethrow_exception(cause_);
    } catch (const ProtocolError&) {
      scorer_failure_ = true;
    } catch (const TransportError&) {
      scorer_failure_ = true;
    } catch (...) {
    }
  }
}

namespace {

template <typename F>
auto run_stage(PipelineStage stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what(), std::current_exception());
  }
}

}  // namespace

SummaryResult summarize(const TechnicalQuery& query, const AnnotationUnit& unit, const PipelineConfig& config) {
  return summarize_sentences(query, unit.sentences, config);
}

SummaryResult summarize_sentences(const TechnicalQuery& query, std::span<const AnswerSentence> sentences,
                                  const PipelineConfig& config) {
  const auto& settings = config.settings;
  settings.validate();
  if (sentences.empty()) throw InvalidArgument("nothing to summarise: the unit has no sentences");
  if (!config.usefulness_scorer) throw InvalidArgument("pipeline has no usefulness scorer");
  if (settings.mode == AblationMode::kFull && !config.embedder) throw InvalidArgument("pipeline has no embedder");

  SummaryResult result;
  result.query = query;
  result.settings = settings;

  std::map<SentenceId, std::size_t> index_of;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!index_of.emplace(sentences[i].id, i).second)
      throw InvalidArgument("duplicate sentence id " + sentences[i].id.str());
    SentenceTrace t;
    t.id = sentences[i].id;
    result.trace.push_back(t);
  }
  auto trace_of = [&](const SentenceId& id) -> SentenceTrace& { return result.trace[index_of.at(id)]; };

  // Stage 1: usefulness.
  std::vector<std::string> texts;
  texts.reserve(sentences.size());
  for (const auto& s : sentences) texts.push_back(s.text);
  const auto scores = run_stage(PipelineStage::kUsefulness, [&] {
    auto out = config.usefulness_scorer->score(query.text, texts);
    if (out.size() != texts.size()) throw ProtocolError("scorer returned a misaligned score list");
    return out;
  });

  std::vector<ScoredSentence> by_usefulness;
  by_usefulness.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    by_usefulness.push_back({sentences[i], scores[i].value()});
    result.trace[i].usefulness = scores[i].value();
  }
  sort_by_score(by_usefulness);
  for (std::size_t r = 0; r < by_usefulness.size(); ++r)
    trace_of(by_usefulness[r].sentence.id).usefulness_rank = static_cast<int>(r) + 1;

  const auto budget = static_cast<std::size_t>(settings.redundancy.budget);
  const std::size_t keep = std::min(by_usefulness.size(), static_cast<std::size_t>(settings.top_k));

  if (settings.mode == AblationMode::kUsefulness) {
    for (std::size_t r = 0; r < by_usefulness.size(); ++r) {
      auto& t = trace_of(by_usefulness[r].sentence.id);
      if (r < budget) {
        t.decision = TraceDecision::kSelected;
        result.sentences.push_back(by_usefulness[r].sentence);
      } else {
        t.decision = r < keep ? TraceDecision::kOverBudget : TraceDecision::kBelowTopK;
      }
    }
    return result;
  }

  // Stage 2: centrality over the top_k.
  std::vector<AnswerSentence> top;
  top.reserve(keep);
  for (std::size_t r = 0; r < keep; ++r) top.push_back(by_usefulness[r].sentence);
  const auto centrality =
      run_stage(PipelineStage::kCentrality, [&] { return rank_by_centrality(top, settings.textrank); });
  result.textrank_iterations = centrality.iterations;
  result.textrank_converged = centrality.converged;
  for (std::size_t r = 0; r < centrality.ranked.size(); ++r) {
    auto& t = trace_of(centrality.ranked[r].sentence.id);
    t.centrality = centrality.ranked[r].score;
    t.centrality_rank = static_cast<int>(r) + 1;
    t.decision = TraceDecision::kOverBudget;
  }

  if (settings.mode == AblationMode::kUsefulnessCentrality) {
    for (std::size_t r = 0; r < std::min(budget, centrality.ranked.size()); ++r) {
      trace_of(centrality.ranked[r].sentence.id).decision = TraceDecision::kSelected;
      result.sentences.push_back(centrality.ranked[r].sentence);
    }
    return result;
  }

  // Stage 3: redundancy removal, one embedding batch per call.
  const auto selection = run_stage(PipelineStage::kRedundancy, [&] {
    const auto embedder = config.embedder(sentences);
    if (!embedder) throw InvalidArgument("embedder factory returned nothing");
    std::vector<std::string> ranked_texts;
    ranked_texts.reserve(centrality.ranked.size());
    for (const auto& s : centrality.ranked) ranked_texts.push_back(s.sentence.text);
    auto embeddings = embedder->embed(ranked_texts);
    if (embeddings.size() != ranked_texts.size()) throw ProtocolError("embedder returned a misaligned vector list");

    std::vector<RankedEmbedding> ranked;
    ranked.reserve(embeddings.size());
    const std::size_t dim = embeddings.empty() ? 0 : embeddings.front().dimension();
    for (std::size_t r = 0; r < embeddings.size(); ++r) {
      if (embeddings[r].dimension() != dim)
        throw ProtocolError("embedder returned mixed dimensions");
      ranked.push_back({centrality.ranked[r].sentence, std::move(embeddings[r])});
    }
    return greedy_select_traced(ranked, settings.redundancy);
  });

  for (const auto& step : selection.steps) {
    auto& t = trace_of(step.id);
    t.max_similarity = step.max_similarity;
    t.most_similar_to = step.most_similar_to;
    switch (step.decision) {
      case SelectionDecision::kSelected:
        t.decision = TraceDecision::kSelected;
        break;
      case SelectionDecision::kRedundant:
        t.decision = TraceDecision::kRedundant;
        break;
      case SelectionDecision::kOverBudget:
        t.decision = TraceDecision::kOverBudget;
        break;
    }
  }
  result.sentences = selection.summary;
  return result;
}

std::vector<BenchmarkOutcome> summarize_benchmark(std::span<const BenchmarkEntry> entries,
                                                  const PipelineConfig& config, int jobs) {
  std::vector<BenchmarkOutcome> outcomes(entries.size());
  auto run_one = [&](std::size_t i) {
    try {
      outcomes[i].result = summarize_sentences(entries[i].query, entries[i].candidates, config);
    } catch (const PipelineError& e) {
      outcomes[i].error = e.what();
      outcomes[i].scorer_failure = e.scorer_failure();
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  };

  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || entries.size() < 2) {
    for (std::size_t i = 0; i < entries.size(); ++i) run_one(i);
    return outcomes;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, entries.size()); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < entries.size(); i = next++) run_one(i);
    });
  }
  for (auto& t : pool) t.join();
  return outcomes;
}

json settings_to_json(const PipelineSettings& s) {
  return {{"mode", to_string(s.mode)},
          {"top_k", s.top_k},
          {"damping", s.textrank.damping},
          {"convergence_threshold", s.textrank.convergence_threshold},
          {"max_iterations", s.textrank.max_iterations},
          {"redundancy_threshold", s.redundancy.threshold},
          {"budget", s.redundancy.budget}};
}

json summary_to_json_value(const SummaryResult& r) {
  json sentences = json::array();
  for (const auto& s : r.sentences) sentences.push_back({{"id", s.id.str()}, {"text", s.text}});
  json trace = json::array();
  for (const auto& t : r.trace) {
    json row = {{"id", t.id.str()},
                {"usefulness", t.usefulness},
                {"usefulness_rank", t.usefulness_rank},
                {"centrality", t.centrality ? json(*t.centrality) : json(nullptr)},
                {"centrality_rank", t.centrality_rank ? json(*t.centrality_rank) : json(nullptr)},
                {"decision", to_string(t.decision)},
                {"max_similarity", t.max_similarity ? json(*t.max_similarity) : json(nullptr)},
                {"most_similar_to", t.most_similar_to ? json(t.most_similar_to->str()) : json(nullptr)}};
    trace.push_back(std::move(row));
  }
  return {{"query", {{"text", r.query.text}, {"tags", r.query.tags}}},
          {"config", settings_to_json(r.settings)},
          {"textrank", {{"iterations", r.textrank_iterations}, {"converged", r.textrank_converged}}},
          {"sentences", sentences},
          {"stage_trace", trace}};
}

std::string summary_to_json(const SummaryResult& result) { return summary_to_json_value(result).dump(2) + "\n"; }

}  // namespace answersum
