#pragma once

// Domain model for technical queries, answers and their sentences, plus the
// cleaning rules that turn answer HTML into labelled sentences.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace answersum {

struct TechnicalQuery {
  std::string text;
  std::set<std::string> tags;

  // Throws InvalidArgument when text is blank.
  static TechnicalQuery make(std::string text, std::set<std::string> tags = {});

  friend bool operator==(const TechnicalQuery&, const TechnicalQuery&) = default;
};

struct Answer {
  int answer_index = 0;
  std::string body_html;
  std::int64_t vote_score = 0;
  std::int64_t source_post_id = 0;

  friend bool operator==(const Answer&, const Answer&) = default;
};

// Position of a sentence inside an annotation unit, rendered as "#AA_SS".
// Ordering is numeric, so "#100_01" sorts after "#99_01".
class SentenceId {
 public:
  constexpr SentenceId() = default;
  SentenceId(int answer_index, int sentence_index);

  // Accepts "#AA_SS" with at least two digits per field.
  static std::optional<SentenceId> parse(std::string_view s);

  int answer_index() const noexcept { return answer_; }
  int sentence_index() const noexcept { return sentence_; }
  std::string str() const;

  friend auto operator<=>(const SentenceId&, const SentenceId&) = default;

 private:
  int answer_ = 0;
  int sentence_ = 0;
};

struct AnswerSentence {
  SentenceId id;
  std::string text;

  int answer_index() const noexcept { return id.answer_index(); }
  int sentence_index() const noexcept { return id.sentence_index(); }

  friend bool operator==(const AnswerSentence&, const AnswerSentence&) = default;
};

struct AnnotationUnit {
  TechnicalQuery query;
  std::vector<Answer> answers;
  std::vector<AnswerSentence> sentences;

  friend bool operator==(const AnnotationUnit&, const AnnotationUnit&) = default;
};

using ReferenceSummary = std::vector<std::string>;

inline constexpr std::size_t kReferenceSentences = 5;

struct BenchmarkEntry {
  TechnicalQuery query;
  std::vector<AnswerSentence> candidates;
  std::vector<ReferenceSummary> references;

  friend bool operator==(const BenchmarkEntry&, const BenchmarkEntry&) = default;
};

inline constexpr std::string_view kLinkPlaceholder = "[external-link]";
inline constexpr std::string_view kCodePlaceholder = "[code-snippet]";
inline constexpr std::string_view kTablePlaceholder = "[table]";
inline constexpr std::string_view kFigurePlaceholder = "[figure]";

// Headings with more than this many words become sentences of their own;
// shorter ones are dropped.
inline constexpr std::size_t kHeadingMinWords = 5;

// Breaks an answer body into raw (still markup-bearing) sentences in document
// order. Code blocks, tables and figure-only paragraphs attach to the
// preceding sentence; when nothing precedes them they stand alone.
std::vector<std::string> split_sentences(std::string_view body_html);

// Replaces links, code blocks, tables and images with placeholders, keeps
// inline code between backticks and strips all other markup. Returns nullopt
// for sentences made of nothing but hyperlinks, and for empty results.
std::optional<std::string> clean_sentence(std::string_view raw);

// True when a cleaned sentence carries words beyond placeholders.
bool has_text_content(std::string_view cleaned);

// Cleans every answer body and numbers the surviving sentences from 1 within
// each answer. Throws InvalidArgument on an empty answer list or repeated
// answer indices.
AnnotationUnit build_unit(TechnicalQuery query, std::vector<Answer> answers);

// Benchmark file I/O. Throws SchemaError naming the first bad entry, or
// Error when the file cannot be read or written.
std::vector<BenchmarkEntry> parse_benchmark(std::string_view json_text);
std::string dump_benchmark(const std::vector<BenchmarkEntry>& entries);
std::vector<BenchmarkEntry> load_benchmark(const std::filesystem::path& path);
void save_benchmark(const std::filesystem::path& path, const std::vector<BenchmarkEntry>& entries);

// Annotation-unit file I/O. A file holds either one unit object or
// {"units": [...]}.
std::vector<AnnotationUnit> parse_units(std::string_view json_text);
std::string dump_units(const std::vector<AnnotationUnit>& units);
std::vector<AnnotationUnit> load_units(const std::filesystem::path& path);
void save_units(const std::filesystem::path& path, const std::vector<AnnotationUnit>& units);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace answersum
