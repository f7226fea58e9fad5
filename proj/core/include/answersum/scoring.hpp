#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace answersum {

// Probability-like usefulness of a sentence for a query, in [0, 1].
class UsefulnessScore {
 public:
  // Throws InvalidArgument outside [0, 1] or for NaN.
  explicit UsefulnessScore(double value);

  double value() const noexcept { return value_; }

  friend bool operator==(const UsefulnessScore&, const UsefulnessScore&) = default;

 private:
  double value_;
};

// Dense sentence vector; components are finite and the dimension is > 0.
class SentenceEmbedding {
 public:
  // Throws InvalidArgument for empty or non-finite input.
  explicit SentenceEmbedding(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t dimension() const noexcept { return values_.size(); }
  double norm() const noexcept;

  friend bool operator==(const SentenceEmbedding&, const SentenceEmbedding&) = default;

 private:
  std::vector<double> values_;
};

// Scores are positionally aligned with the input sentences. Implementations
// must be deterministic and safe to call concurrently.
class UsefulnessScorer {
 public:
  virtual ~UsefulnessScorer() = default;
  virtual std::vector<UsefulnessScore> score(std::string_view query,
                                             std::span<const std::string> sentences) const = 0;
};

class SentenceEmbedder {
 public:
  virtual ~SentenceEmbedder() = default;
  virtual std::vector<SentenceEmbedding> embed(std::span<const std::string> sentences) const = 0;
  virtual std::size_t dimension() const = 0;
};

// Share of the query's distinct tokens that also occur in the sentence.
// Throws InvalidArgument when the query has no tokens.
std::vector<UsefulnessScore> lexical_usefulness(std::string_view query, std::span<const std::string> sentences);

class LexicalUsefulnessScorer final : public UsefulnessScorer {
 public:
  std::vector<UsefulnessScore> score(std::string_view query, std::span<const std::string> sentences) const override;
};

// TF-IDF vectors over a fixed corpus vocabulary: raw term counts times
// smoothed idf ln((1 + N) / (1 + df)) + 1, then L2-normalised. Tokens outside
// the vocabulary are ignored, so a sentence sharing nothing with the corpus
// maps to the zero vector.
class TfidfEmbedder final : public SentenceEmbedder {
 public:
  // Throws InvalidArgument on an empty corpus.
  static TfidfEmbedder fit(std::span<const std::string> corpus);

  std::vector<SentenceEmbedding> embed(std::span<const std::string> sentences) const override;
  std::size_t dimension() const override;

  SentenceEmbedding embed_one(std::string_view sentence) const;

  // Vocabulary in column order (lexicographic) with its idf weights.
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  const std::vector<double>& idf() const noexcept { return idf_; }

 private:
  std::vector<std::string> vocabulary_;
  std::vector<double> idf_;
  std::map<std::string, std::size_t, std::less<>> column_;
};

TfidfEmbedder tfidf_embed(std::span<const std::string> corpus);

// Cosine of query and sentence TF-IDF vectors, fitted per call over the query
// plus the sentences. Always lands in [0, 1].
class TfidfUsefulnessScorer final : public UsefulnessScorer {
 public:
  std::vector<UsefulnessScore> score(std::string_view query, std::span<const std::string> sentences) const override;
};

// a.b / (|a||b|), or 0 when either vector is zero. Throws InvalidArgument on
// dimension mismatch.
double cosine_similarity(const SentenceEmbedding& a, const SentenceEmbedding& b);

}  // namespace answersum
