#pragma once

// Streaming readers for the Stack Overflow dump tables Posts.xml and
// PostLinks.xml, and the two mining procedures built on them: annotation
// units from duplicate clusters, and contrastive title triplets.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "answersum/corpus.hpp"

namespace answersum {

enum class PostType { kQuestion, kAnswer };

struct PostRecord {
  std::int64_t post_id = 0;
  PostType post_type = PostType::kQuestion;
  std::optional<std::int64_t> parent_id;  // answers only
  std::optional<std::string> title;       // questions only
  std::string body_html;
  std::set<std::string> tags;
  std::int64_t score = 0;
};

struct DuplicateLink {
  std::int64_t duplicate_post_id = 0;
  std::int64_t original_post_id = 0;

  friend bool operator==(const DuplicateLink&, const DuplicateLink&) = default;
};

struct SentenceTriplet {
  std::string anchor;
  std::string positive;
  std::string negative;

  friend bool operator==(const SentenceTriplet&, const SentenceTriplet&) = default;
};

// LinkTypeId the dump uses for duplicate links.
inline constexpr int kDuplicateLinkType = 3;

// Parses "<java><spring>" and "|java|spring|" encodings.
std::set<std::string> parse_tags(std::string_view encoded);

namespace detail {
class XmlRowStream;
}

struct PostLinksStats {
  std::uint64_t rows = 0;
  std::uint64_t links = 0;
  std::uint64_t skipped_other_link_type = 0;
  std::uint64_t skipped_self_link = 0;
  std::uint64_t skipped_malformed = 0;
};

// Pull reader over PostLinks.xml rows. Memory use does not grow with the
// stream. next() throws ParseError with the byte offset on malformed XML.
class PostLinksReader {
 public:
  explicit PostLinksReader(std::istream& in);
  ~PostLinksReader();
  PostLinksReader(PostLinksReader&&) noexcept;
  PostLinksReader& operator=(PostLinksReader&&) noexcept;

  std::optional<DuplicateLink> next();
  const PostLinksStats& stats() const noexcept { return stats_; }

 private:
  std::unique_ptr<detail::XmlRowStream> rows_;
  PostLinksStats stats_;
};

struct PostsStats {
  std::uint64_t rows = 0;
  std::uint64_t questions = 0;
  std::uint64_t answers = 0;
  std::uint64_t skipped_missing_body = 0;
  std::uint64_t skipped_other_post_type = 0;
  std::uint64_t skipped_malformed = 0;
};

class PostsReader {
 public:
  explicit PostsReader(std::istream& in);
  ~PostsReader();
  PostsReader(PostsReader&&) noexcept;
  PostsReader& operator=(PostsReader&&) noexcept;

  std::optional<PostRecord> next();
  const PostsStats& stats() const noexcept { return stats_; }

 private:
  std::unique_ptr<detail::XmlRowStream> rows_;
  PostsStats stats_;
};

std::vector<DuplicateLink> read_all_links(std::istream& in, PostLinksStats* stats = nullptr);

// In-memory index of posts by id and answers by parent question. Read-only
// after loading, so concurrent lookups are safe.
class PostStore {
 public:
  void add(PostRecord post);

  const PostRecord* find(std::int64_t post_id) const;
  // Answer ids of a question, ascending.
  std::vector<std::int64_t> answers_of(std::int64_t question_id) const;
  // Question ids in ascending order.
  const std::vector<std::int64_t>& question_ids() const;
  std::size_t size() const noexcept { return posts_.size(); }

  static PostStore load(std::istream& posts_xml, PostsStats* stats = nullptr);

 private:
  std::unordered_map<std::int64_t, PostRecord> posts_;
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> answers_;
  mutable std::vector<std::int64_t> question_ids_;
  mutable bool question_ids_sorted_ = true;
};

struct ExtractionOptions {
  std::set<std::string> languages{"java", "python"};
  std::size_t min_answers = 10;
  std::size_t max_answers = 15;
};

struct ExtractionStats {
  std::uint64_t originals = 0;
  std::uint64_t units_kept = 0;
  std::uint64_t dropped_missing_original = 0;
  std::uint64_t dropped_language = 0;
  std::uint64_t dropped_too_few_answers = 0;
  std::uint64_t dropped_too_many_answers = 0;
  std::uint64_t missing_duplicates = 0;
  std::uint64_t answers_without_votes = 0;
  std::uint64_t answers_code_only = 0;
};

// One unit per original question tagged with a requested language: answers of
// the original and all its duplicates with a positive score and at least one
// text sentence, kept only when their count is within [min, max]. Answers are
// ordered by post id. Output is ordered by original post id and does not
// depend on link order.
std::vector<AnnotationUnit> extract_annotation_units(std::span<const DuplicateLink> links, const PostStore& posts,
                                                     const ExtractionOptions& options = {},
                                                     ExtractionStats* stats = nullptr);

struct TripletOptions {
  std::set<std::string> languages{"java", "python"};
  std::uint64_t seed = 42;
  // Draw negatives from every question rather than only language-tagged ones.
  bool negatives_from_all_questions = false;
};

struct TripletStats {
  std::uint64_t pairs = 0;
  std::uint64_t emitted = 0;
  std::uint64_t skipped_missing_post = 0;
  std::uint64_t skipped_language = 0;
  std::uint64_t skipped_no_negative = 0;
};

// For each duplicate link whose original is tagged with a requested language:
// (original title, duplicate title, title of a uniformly drawn question that
// shares no tag with the original). Deterministic for a given seed and input.
void build_contrastive_triplets(std::span<const DuplicateLink> links, const PostStore& posts,
                                const TripletOptions& options,
                                const std::function<void(const SentenceTriplet&)>& sink,
                                TripletStats* stats = nullptr);

std::vector<SentenceTriplet> build_contrastive_triplets(std::span<const DuplicateLink> links, const PostStore& posts,
                                                        const TripletOptions& options = {},
                                                        TripletStats* stats = nullptr);

// {"anchor": ..., "positive": ..., "negative": ...} without a trailing newline.
std::string triplet_to_jsonl(const SentenceTriplet& t);
SentenceTriplet triplet_from_jsonl(std::string_view line);

}  // namespace answersum
