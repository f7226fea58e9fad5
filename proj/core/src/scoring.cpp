#include "answersum/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "answersum/error.hpp"
#include "answersum/text.hpp"

namespace answersum {

UsefulnessScore::UsefulnessScore(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) throw InvalidArgument("usefulness score outside [0, 1]");
}

SentenceEmbedding::SentenceEmbedding(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("embedding has dimension 0");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("embedding has a non-finite component");
  }
}

double SentenceEmbedding::norm() const noexcept {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

std::vector<UsefulnessScore> lexical_usefulness(std::string_view query, std::span<const std::string> sentences) {
  const auto query_tokens = text::tokenize(query);
  const std::set<std::string> query_set(query_tokens.begin(), query_tokens.end());
  if (query_set.empty()) throw InvalidArgument("query has no tokens");

  std::vector<UsefulnessScore> scores;
  scores.reserve(sentences.size());
  for (const auto& sentence : sentences) {
    const auto tokens = text::tokenize(sentence);
    const std::set<std::string> sentence_set(tokens.begin(), tokens.end());
    std::size_t shared = 0;
    for (const auto& t : query_set) shared += sentence_set.count(t);
    scores.emplace_back(static_cast<double>(shared) / static_cast<double>(query_set.size()));
  }
  return scores;
}

std::vector<UsefulnessScore> LexicalUsefulnessScorer::score(std::string_view query,
                                                            std::span<const std::string> sentences) const {
  return lexical_usefulness(query, sentences);
}

TfidfEmbedder TfidfEmbedder::fit(std::span<const std::string> corpus) {
  if (corpus.empty()) throw InvalidArgument("TF-IDF corpus is empty");
  std::map<std::string, std::size_t, std::less<>> document_frequency;
  for (const auto& doc : corpus) {
    const auto tokens = text::tokenize(doc);
    for (const auto& t : std::set<std::string>(tokens.begin(), tokens.end())) ++document_frequency[t];
  }

  TfidfEmbedder e;
  const double n = static_cast<double>(corpus.size());
  for (const auto& [term, df] : document_frequency) {
    e.column_.emplace(term, e.vocabulary_.size());
    e.vocabulary_.push_back(term);
    e.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0);
  }
  return e;
}

std::size_t TfidfEmbedder::dimension() const { return std::max<std::size_t>(1, vocabulary_.size()); }

SentenceEmbedding TfidfEmbedder::embed_one(std::string_view sentence) const {
  std::vector<double> v(dimension(), 0.0);
  for (const auto& t : text::tokenize(sentence)) {
    const auto it = column_.find(t);
    if (it != column_.end()) v[it->second] += 1.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    v[i] *= idf_[i];
    sum += v[i] * v[i];
  }
  if (sum > 0.0) {
    const double norm = std::sqrt(sum);
    for (auto& x : v) x /= norm;
  }
  return SentenceEmbedding(std::move(v));
}

std::vector<SentenceEmbedding> TfidfEmbedder::embed(std::span<const std::string> sentences) const {
  std::vector<SentenceEmbedding> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(embed_one(s));
  return out;
}

TfidfEmbedder tfidf_embed(std::span<const std::string> corpus) { return TfidfEmbedder::fit(corpus); }

std::vector<UsefulnessScore> TfidfUsefulnessScorer::score(std::string_view query,
                                                          std::span<const std::string> sentences) const {
  if (text::tokenize(query).empty()) throw InvalidArgument("query has no tokens");
  std::vector<std::string> corpus(sentences.begin(), sentences.end());
  corpus.emplace_back(query);
  const auto embedder = TfidfEmbedder::fit(corpus);
  const auto q = embedder.embed_one(query);

  std::vector<UsefulnessScore> scores;
  scores.reserve(sentences.size());
  for (const auto& s : sentences) {
    scores.emplace_back(std::clamp(cosine_similarity(q, embedder.embed_one(s)), 0.0, 1.0));
  }
  return scores;
}

double cosine_similarity(const SentenceEmbedding& a, const SentenceEmbedding& b) {
  if (a.dimension() != b.dimension()) {
    throw InvalidArgument("embedding dimension mismatch: " + std::to_string(a.dimension()) + " vs " +
                          std::to_string(b.dimension()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  const auto x = a.values();
  const auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    na += x[i] * x[i];
    nb += y[i] * y[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace answersum
