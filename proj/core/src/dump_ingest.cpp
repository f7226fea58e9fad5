#include "answersum/dump_ingest.hpp"

#include <expat.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <deque>
#include <istream>
#include <map>
#include <random>

#include "answersum/error.hpp"
#include "answersum/text.hpp"
#include "json.hpp"

namespace answersum {

namespace detail {

// Pulls <row .../> elements out of an XML stream one parser chunk at a time.
// Only the attributes a caller asked for are kept.
class XmlRowStream {
 public:
  using Row = std::vector<std::pair<std::string, std::string>>;

  XmlRowStream(std::istream& in, std::vector<std::string> wanted) : in_(in), wanted_(std::move(wanted)) {
    parser_ = XML_ParserCreate("UTF-8");
    if (!parser_) throw Error("cannot allocate XML parser");
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &XmlRowStream::on_start, &XmlRowStream::on_end);
  }

  ~XmlRowStream() {
    if (parser_) XML_ParserFree(parser_);
  }

  XmlRowStream(const XmlRowStream&) = delete;
  XmlRowStream& operator=(const XmlRowStream&) = delete;

  std::optional<Row> next() {
    while (pending_.empty() && !done_) feed();
    if (pending_.empty()) return std::nullopt;
    Row row = std::move(pending_.front());
    pending_.pop_front();
    return row;
  }

 private:
  static constexpr std::size_t kChunk = 64 * 1024;

  void feed() {
    void* buf = XML_GetBuffer(parser_, static_cast<int>(kChunk));
    if (!buf) throw Error("XML parser out of memory");
    in_.read(static_cast<char*>(buf), static_cast<std::streamsize>(kChunk));
    const auto got = static_cast<std::size_t>(in_.gcount());
    if (in_.bad()) throw Error("read error on dump stream");
    const char* bytes = static_cast<const char*>(buf);
    for (std::size_t i = 0; i < got && !seen_content_; ++i) {
      seen_content_ = !std::isspace(static_cast<unsigned char>(bytes[i]));
    }
    const bool final = got == 0;
    if (final && !seen_content_) {
      done_ = true;  // empty stream: no rows, no error
      return;
    }
    if (XML_ParseBuffer(parser_, static_cast<int>(got), final ? 1 : 0) == XML_STATUS_ERROR) {
      throw ParseError(std::string("malformed dump XML: ") + XML_ErrorString(XML_GetErrorCode(parser_)),
                       static_cast<std::uint64_t>(XML_GetCurrentByteIndex(parser_)));
    }
    done_ = final;
  }

  static void XMLCALL on_start(void* self_ptr, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<XmlRowStream*>(self_ptr);
    ++self->depth_;
    if (self->depth_ != 2 || std::string_view(name) != "row") return;
    Row row;
    for (std::size_t i = 0; attrs[i]; i += 2) {
      const std::string_view key = attrs[i];
      if (std::find(self->wanted_.begin(), self->wanted_.end(), key) != self->wanted_.end())
        row.emplace_back(key, attrs[i + 1]);
    }
    self->pending_.push_back(std::move(row));
  }

  static void XMLCALL on_end(void* self_ptr, const XML_Char*) { --static_cast<XmlRowStream*>(self_ptr)->depth_; }

  std::istream& in_;
  std::vector<std::string> wanted_;
  XML_Parser parser_ = nullptr;
  std::deque<Row> pending_;
  int depth_ = 0;
  bool done_ = false;
  bool seen_content_ = false;
};

}  // namespace detail

namespace {

const std::string* attr(const detail::XmlRowStream::Row& row, std::string_view key) {
  for (const auto& [k, v] : row) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::optional<std::int64_t> int_attr(const detail::XmlRowStream::Row& row, std::string_view key) {
  const auto* v = attr(row, key);
  if (!v) return std::nullopt;
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) return std::nullopt;
  return out;
}

}  // namespace

std::set<std::string> parse_tags(std::string_view encoded) {
  std::set<std::string> tags;
  std::string current;
  for (char c : encoded) {
    if (c == '<' || c == '>' || c == '|') {
      if (!current.empty()) tags.insert(text::to_lower(current));
      current.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      current.push_back(c);
    }
  }
  if (!current.empty()) tags.insert(text::to_lower(current));
  return tags;
}

PostLinksReader::PostLinksReader(std::istream& in)
    : rows_(std::make_unique<detail::XmlRowStream>(
          in, std::vector<std::string>{"PostId", "RelatedPostId", "LinkTypeId"})) {}
PostLinksReader::~PostLinksReader() = default;
PostLinksReader::PostLinksReader(PostLinksReader&&) noexcept = default;
PostLinksReader& PostLinksReader::operator=(PostLinksReader&&) noexcept = default;

std::optional<DuplicateLink> PostLinksReader::next() {
  while (auto row = rows_->next()) {
    ++stats_.rows;
    const auto post = int_attr(*row, "PostId");
    const auto related = int_attr(*row, "RelatedPostId");
    const auto type = int_attr(*row, "LinkTypeId");
    if (!post || !related || !type) {
      ++stats_.skipped_malformed;
      continue;
    }
    if (*type != kDuplicateLinkType) {
      ++stats_.skipped_other_link_type;
      continue;
    }
    if (*post == *related) {
      ++stats_.skipped_self_link;
      continue;
    }
    ++stats_.links;
    return DuplicateLink{*post, *related};
  }
  return std::nullopt;
}

PostsReader::PostsReader(std::istream& in)
    : rows_(std::make_unique<detail::XmlRowStream>(
          in, std::vector<std::string>{"Id", "PostTypeId", "ParentId", "Title", "Body", "Tags", "Score"})) {}
PostsReader::~PostsReader() = default;
PostsReader::PostsReader(PostsReader&&) noexcept = default;
PostsReader& PostsReader::operator=(PostsReader&&) noexcept = default;

std::optional<PostRecord> PostsReader::next() {
  while (auto row = rows_->next()) {
    ++stats_.rows;
    const auto id = int_attr(*row, "Id");
    const auto type = int_attr(*row, "PostTypeId");
    if (!id || !type) {
      ++stats_.skipped_malformed;
      continue;
    }
    if (*type != 1 && *type != 2) {
      ++stats_.skipped_other_post_type;
      continue;
    }
    const auto* body = attr(*row, "Body");
    if (!body) {
      ++stats_.skipped_missing_body;
      continue;
    }
    PostRecord rec;
    rec.post_id = *id;
    rec.post_type = *type == 1 ? PostType::kQuestion : PostType::kAnswer;
    rec.body_html = *body;
    rec.score = int_attr(*row, "Score").value_or(0);
    if (const auto* tags = attr(*row, "Tags")) rec.tags = parse_tags(*tags);
    if (rec.post_type == PostType::kAnswer) {
      rec.parent_id = int_attr(*row, "ParentId");
      if (!rec.parent_id) {
        ++stats_.skipped_malformed;
        continue;
      }
      ++stats_.answers;
    } else {
      const auto* title = attr(*row, "Title");
      if (!title) {
        ++stats_.skipped_malformed;
        continue;
      }
      rec.title = *title;
      ++stats_.questions;
    }
    return rec;
  }
  return std::nullopt;
}

std::vector<DuplicateLink> read_all_links(std::istream& in, PostLinksStats* stats) {
  PostLinksReader reader(in);
  std::vector<DuplicateLink> links;
  while (auto link = reader.next()) links.push_back(*link);
  if (stats) *stats = reader.stats();
  return links;
}

void PostStore::add(PostRecord post) {
  const auto id = post.post_id;
  if (post.post_type == PostType::kAnswer && post.parent_id) {
    answers_[*post.parent_id].push_back(id);
  } else if (post.post_type == PostType::kQuestion) {
    if (!question_ids_.empty() && question_ids_.back() > id) question_ids_sorted_ = false;
    question_ids_.push_back(id);
  }
  posts_.insert_or_assign(id, std::move(post));
}

const PostRecord* PostStore::find(std::int64_t post_id) const {
  const auto it = posts_.find(post_id);
  return it == posts_.end() ? nullptr : &it->second;
}

std::vector<std::int64_t> PostStore::answers_of(std::int64_t question_id) const {
  const auto it = answers_.find(question_id);
  if (it == answers_.end()) return {};
  auto ids = it->second;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

const std::vector<std::int64_t>& PostStore::question_ids() const {
  if (!question_ids_sorted_) {
    std::sort(question_ids_.begin(), question_ids_.end());
    question_ids_.erase(std::unique(question_ids_.begin(), question_ids_.end()), question_ids_.end());
    question_ids_sorted_ = true;
  }
  return question_ids_;
}

PostStore PostStore::load(std::istream& posts_xml, PostsStats* stats) {
  PostsReader reader(posts_xml);
  PostStore store;
  while (auto post = reader.next()) store.add(std::move(*post));
  store.question_ids();
  if (stats) *stats = reader.stats();
  return store;
}

namespace {

bool tagged_with_any(const std::set<std::string>& tags, const std::set<std::string>& wanted) {
  return std::any_of(wanted.begin(), wanted.end(), [&](const auto& w) { return tags.count(text::to_lower(w)) > 0; });
}

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return true;
}

bool has_text_sentence(const std::string& body_html) {
  for (const auto& raw : split_sentences(body_html)) {
    const auto cleaned = clean_sentence(raw);
    if (cleaned && has_text_content(*cleaned)) return true;
  }
  return false;
}

// Unbiased draw from [0, n) on the raw mt19937_64 stream, so the sequence is
// the same on every standard library.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

}  // namespace

std::vector<AnnotationUnit> extract_annotation_units(std::span<const DuplicateLink> links, const PostStore& posts,
                                                     const ExtractionOptions& options, ExtractionStats* stats) {
  ExtractionStats local;
  ExtractionStats& st = stats ? *stats : local;
  st = {};

  std::map<std::int64_t, std::set<std::int64_t>> clusters;
  for (const auto& l : links) clusters[l.original_post_id].insert(l.duplicate_post_id);

  std::vector<AnnotationUnit> units;
  for (const auto& [original_id, duplicates] : clusters) {
    ++st.originals;
    const PostRecord* original = posts.find(original_id);
    if (!original || original->post_type != PostType::kQuestion || !original->title ||
        text::trim(*original->title).empty()) {
      ++st.dropped_missing_original;
      continue;
    }
    if (!tagged_with_any(original->tags, options.languages)) {
      ++st.dropped_language;
      continue;
    }

    std::set<std::int64_t> answer_ids;
    for (auto id : posts.answers_of(original_id)) answer_ids.insert(id);
    for (auto dup_id : duplicates) {
      const PostRecord* dup = posts.find(dup_id);
      if (!dup || dup->post_type != PostType::kQuestion) {
        ++st.missing_duplicates;
        continue;
      }
      for (auto id : posts.answers_of(dup_id)) answer_ids.insert(id);
    }

    std::vector<Answer> answers;
    for (auto id : answer_ids) {
      const PostRecord* a = posts.find(id);
      if (a->score <= 0) {
        ++st.answers_without_votes;
        continue;
      }
      if (!has_text_sentence(a->body_html)) {
        ++st.answers_code_only;
        continue;
      }
      answers.push_back({static_cast<int>(answers.size()), a->body_html, a->score, a->post_id});
    }

    if (answers.size() < options.min_answers) {
      ++st.dropped_too_few_answers;
      continue;
    }
    if (answers.size() > options.max_answers) {
      ++st.dropped_too_many_answers;
      continue;
    }
    units.push_back(build_unit(TechnicalQuery{*original->title, original->tags}, std::move(answers)));
    ++st.units_kept;
  }
  return units;
}

void build_contrastive_triplets(std::span<const DuplicateLink> links, const PostStore& posts,
                                const TripletOptions& options,
                                const std::function<void(const SentenceTriplet&)>& sink, TripletStats* stats) {
  TripletStats local;
  TripletStats& st = stats ? *stats : local;
  st = {};

  std::vector<const PostRecord*> pool;
  for (auto id : posts.question_ids()) {
    const PostRecord* q = posts.find(id);
    if (!q->title || text::trim(*q->title).empty()) continue;
    if (options.negatives_from_all_questions || tagged_with_any(q->tags, options.languages)) pool.push_back(q);
  }

  std::mt19937_64 rng(options.seed);
  constexpr int kRejectionAttempts = 64;

  for (const auto& link : links) {
    ++st.pairs;
    const PostRecord* anchor = posts.find(link.original_post_id);
    const PostRecord* positive = posts.find(link.duplicate_post_id);
    if (!anchor || !positive || !anchor->title || !positive->title || text::trim(*anchor->title).empty() ||
        text::trim(*positive->title).empty()) {
      ++st.skipped_missing_post;
      continue;
    }
    if (!tagged_with_any(anchor->tags, options.languages)) {
      ++st.skipped_language;
      continue;
    }

    auto valid = [&](const PostRecord* q) {
      return q->post_id != anchor->post_id && q->post_id != positive->post_id && *q->title != *anchor->title &&
             disjoint(q->tags, anchor->tags);
    };

    const PostRecord* negative = nullptr;
    if (!pool.empty()) {
      for (int attempt = 0; attempt < kRejectionAttempts && !negative; ++attempt) {
        const PostRecord* q = pool[uniform_below(rng, pool.size())];
        if (valid(q)) negative = q;
      }
      if (!negative) {
        std::vector<const PostRecord*> candidates;
        std::copy_if(pool.begin(), pool.end(), std::back_inserter(candidates), valid);
        if (!candidates.empty()) negative = candidates[uniform_below(rng, candidates.size())];
      }
    }
    if (!negative) {
      ++st.skipped_no_negative;
      continue;
    }
    sink(SentenceTriplet{*anchor->title, *positive->title, *negative->title});
    ++st.emitted;
  }
}

std::vector<SentenceTriplet> build_contrastive_triplets(std::span<const DuplicateLink> links, const PostStore& posts,
                                                        const TripletOptions& options, TripletStats* stats) {
  std::vector<SentenceTriplet> out;
  build_contrastive_triplets(
      links, posts, options, [&](const SentenceTriplet& t) { out.push_back(t); }, stats);
  return out;
}

std::string triplet_to_jsonl(const SentenceTriplet& t) {
  return nlohmann::json{{"anchor", t.anchor}, {"positive", t.positive}, {"negative", t.negative}}.dump();
}

SentenceTriplet triplet_from_jsonl(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("triplet line is not JSON: ") + e.what());
  }
  for (const char* key : {"anchor", "positive", "negative"}) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_string())
      throw SchemaError(std::string("triplet line lacks string field \"") + key + "\"");
  }
  return {j.at("anchor").get<std::string>(), j.at("positive").get<std::string>(), j.at("negative").get<std::string>()};
}

}  // namespace answersum
