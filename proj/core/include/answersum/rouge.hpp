#pragma once

// Multi-reference ROUGE-N and ROUGE-L. Each metric is computed against every
// reference separately and averaged over references; benchmark reports then
// average over queries.

#include <span>
#include <string>
#include <vector>

#include "answersum/corpus.hpp"
#include "answersum/pipeline.hpp"

namespace answersum {

struct RougeScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;

  // f1 from recall and precision; 0 when both are 0.
  static RougeScore from(double recall, double precision);
};

struct RougeTriple {
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
};

using TokenList = std::vector<std::string>;

// Clipped n-gram overlap. Throws InvalidArgument for n < 1 or no references.
RougeScore rouge_n(std::span<const std::string> candidate, std::span<const TokenList> references, int n);

// Whole-sequence LCS. Throws InvalidArgument for no references.
RougeScore rouge_l(std::span<const std::string> candidate, std::span<const TokenList> references);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

// Lowercase, split on non-alphanumerics, no stemming or stopwords.
TokenList rouge_tokens(std::string_view text);
TokenList rouge_tokens(std::span<const std::string> sentences);

struct QueryRouge {
  std::string query_id;  // "q001", ... in entry order
  std::string query_text;
  RougeTriple scores;
  bool failed = false;  // summariser failed; scored as an empty summary
};

struct RougeReport {
  std::string system;
  std::vector<QueryRouge> per_query;
  RougeTriple aggregate;  // arithmetic mean of per_query
  PipelineSettings config_echo;
};

RougeTriple rouge_triple(std::span<const std::string> candidate, std::span<const TokenList> references);

// results[i] scores against entries[i]. Throws InvalidArgument on a length
// mismatch.
RougeReport evaluate_benchmark(std::span<const SummaryResult> results, std::span<const BenchmarkEntry> entries,
                               std::string system = "answersum");

// Same, tolerating failed entries (scored as empty summaries and flagged).
RougeReport evaluate_outcomes(std::span<const BenchmarkOutcome> outcomes, std::span<const BenchmarkEntry> entries,
                              const PipelineSettings& settings, std::string system = "answersum");

std::string report_to_json(const RougeReport& report);

// Fixed-width table: one row each for recall, precision and F1, columns
// ROUGE-1, ROUGE-2, ROUGE-L.
std::string report_to_table(const RougeReport& report);

}  // namespace answersum
