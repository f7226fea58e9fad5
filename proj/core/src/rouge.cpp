#include "answersum/rouge.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <map>

#include "answersum/error.hpp"
#include "answersum/text.hpp"
#include "json_util.hpp"

namespace answersum {

using nlohmann::json;

RougeScore RougeScore::from(double recall, double precision) {
  const double sum = recall + precision;
  return {recall, precision, sum > 0.0 ? 2.0 * recall * precision / sum : 0.0};
}

namespace {

using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string_view>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                           tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

RougeScore mean_of(const std::vector<RougeScore>& scores) {
  RougeScore m;
  for (const auto& s : scores) {
    m.recall += s.recall;
    m.precision += s.precision;
    m.f1 += s.f1;
  }
  const auto k = static_cast<double>(scores.size());
  m.recall /= k;
  m.precision /= k;
  m.f1 /= k;
  return m;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

RougeScore rouge_n(std::span<const std::string> candidate, std::span<const TokenList> references, int n) {
  if (n < 1) throw InvalidArgument("ROUGE-N needs n >= 1");
  if (references.empty()) throw InvalidArgument("ROUGE needs at least one reference");
  const auto gram = static_cast<std::size_t>(n);
  const auto cand = count_ngrams(candidate, gram);
  const std::size_t cand_total = candidate.size() >= gram ? candidate.size() - gram + 1 : 0;

  std::vector<RougeScore> per_ref;
  per_ref.reserve(references.size());
  for (const auto& ref : references) {
    const auto ref_counts = count_ngrams(ref, gram);
    const std::size_t ref_total = ref.size() >= gram ? ref.size() - gram + 1 : 0;
    std::size_t match = 0;
    for (const auto& [g, c] : ref_counts) {
      const auto it = cand.find(g);
      if (it != cand.end()) match += std::min(c, it->second);
    }
    per_ref.push_back(RougeScore::from(ratio(match, ref_total), ratio(match, cand_total)));
  }
  return mean_of(per_ref);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l(std::span<const std::string> candidate, std::span<const TokenList> references) {
  if (references.empty()) throw InvalidArgument("ROUGE needs at least one reference");
  std::vector<RougeScore> per_ref;
  per_ref.reserve(references.size());
  for (const auto& ref : references) {
    const auto l = lcs_length(candidate, ref);
    per_ref.push_back(RougeScore::from(ratio(l, ref.size()), ratio(l, candidate.size())));
  }
  return mean_of(per_ref);
}

TokenList rouge_tokens(std::string_view text) { return text::tokenize_plain(text); }

TokenList rouge_tokens(std::span<const std::string> sentences) {
  TokenList out;
  for (const auto& s : sentences) {
    auto t = text::tokenize_plain(s);
    out.insert(out.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
  }
  return out;
}

RougeTriple rouge_triple(std::span<const std::string> candidate, std::span<const TokenList> references) {
  return {rouge_n(candidate, references, 1), rouge_n(candidate, references, 2), rouge_l(candidate, references)};
}

namespace {

std::string query_id(std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "q%03zu", i + 1);
  return buf;
}

void accumulate(RougeScore& into, const RougeScore& s) {
  into.recall += s.recall;
  into.precision += s.precision;
  into.f1 += s.f1;
}

void divide(RougeScore& s, double k) {
  s.recall /= k;
  s.precision /= k;
  s.f1 /= k;
}

RougeTriple average(const std::vector<QueryRouge>& rows) {
  RougeTriple agg;
  if (rows.empty()) return agg;
  for (const auto& r : rows) {
    accumulate(agg.rouge1, r.scores.rouge1);
    accumulate(agg.rouge2, r.scores.rouge2);
    accumulate(agg.rougeL, r.scores.rougeL);
  }
  const auto k = static_cast<double>(rows.size());
  divide(agg.rouge1, k);
  divide(agg.rouge2, k);
  divide(agg.rougeL, k);
  return agg;
}

QueryRouge score_entry(std::size_t i, const BenchmarkEntry& entry, std::span<const AnswerSentence> summary) {
  std::vector<std::string> texts;
  for (const auto& s : summary) texts.push_back(s.text);
  const auto candidate = rouge_tokens(texts);
  std::vector<TokenList> refs;
  for (const auto& r : entry.references) refs.push_back(rouge_tokens(r));
  return {query_id(i), entry.query.text, rouge_triple(candidate, refs), false};
}

}  // namespace

RougeReport evaluate_benchmark(std::span<const SummaryResult> results, std::span<const BenchmarkEntry> entries,
                               std::string system) {
  if (results.size() != entries.size()) {
    throw InvalidArgument("results and benchmark entries are misaligned: " + std::to_string(results.size()) +
                          " vs " + std::to_string(entries.size()));
  }
  RougeReport report;
  report.system = std::move(system);
  if (!results.empty()) report.config_echo = results.front().settings;
  for (std::size_t i = 0; i < entries.size(); ++i)
    report.per_query.push_back(score_entry(i, entries[i], results[i].sentences));
  report.aggregate = average(report.per_query);
  return report;
}

RougeReport evaluate_outcomes(std::span<const BenchmarkOutcome> outcomes, std::span<const BenchmarkEntry> entries,
                              const PipelineSettings& settings, std::string system) {
  if (outcomes.size() != entries.size()) {
    throw InvalidArgument("outcomes and benchmark entries are misaligned: " + std::to_string(outcomes.size()) +
                          " vs " + std::to_string(entries.size()));
  }
  RougeReport report;
  report.system = std::move(system);
  report.config_echo = settings;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (outcomes[i].ok()) {
      report.per_query.push_back(score_entry(i, entries[i], outcomes[i].result->sentences));
    } else {
      auto row = score_entry(i, entries[i], {});
      row.failed = true;
      report.per_query.push_back(std::move(row));
    }
  }
  report.aggregate = average(report.per_query);
  return report;
}

namespace {

json score_json(const RougeScore& s) { return {{"recall", s.recall}, {"precision", s.precision}, {"f1", s.f1}}; }

json triple_json(const RougeTriple& t) {
  return {{"rouge1", score_json(t.rouge1)}, {"rouge2", score_json(t.rouge2)}, {"rougeL", score_json(t.rougeL)}};
}

}  // namespace

std::string report_to_json(const RougeReport& report) {
  json per_query = json::array();
  for (const auto& q : report.per_query) {
    json row = triple_json(q.scores);
    row["query_id"] = q.query_id;
    row["query"] = q.query_text;
    row["failed"] = q.failed;
    per_query.push_back(std::move(row));
  }
  json doc = {{"system", report.system},
              {"headline", "f1"},
              {"rouge_l", "whole-sequence LCS"},
              {"tokenization", "lowercase, split on non-alphanumerics, no stemming, no stopwords"},
              {"config", settings_to_json(report.config_echo)},
              {"aggregate", triple_json(report.aggregate)},
              {"per_query", per_query}};
  return doc.dump(2) + "\n";
}

std::string report_to_table(const RougeReport& report) {
  const auto& a = report.aggregate;
  const std::pair<const char*, double RougeScore::*> metrics[] = {
      {"R", &RougeScore::recall}, {"P", &RougeScore::precision}, {"F1", &RougeScore::f1}};

  std::size_t width = std::string_view("system").size();
  for (const auto& [suffix, field] : metrics) width = std::max(width, report.system.size() + 3 + std::strlen(suffix));
  auto pad = [&](std::string s) { return s.append(width - s.size(), ' '); };

  char buf[128];
  std::snprintf(buf, sizeof buf, "  %8s  %8s  %8s\n", "ROUGE-1", "ROUGE-2", "ROUGE-L");
  std::string out = pad("system") + buf;
  for (const auto& [suffix, field] : metrics) {
    std::snprintf(buf, sizeof buf, "  %8.4f  %8.4f  %8.4f\n", a.rouge1.*field, a.rouge2.*field, a.rougeL.*field);
    out += pad(report.system + " (" + suffix + ")") + buf;
  }
  return out;
}

}  // namespace answersum
