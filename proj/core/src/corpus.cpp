#include "answersum/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "answersum/error.hpp"
#include "answersum/text.hpp"
#include "html_fragment.hpp"
#include "json.hpp"

namespace answersum {

using nlohmann::json;

TechnicalQuery TechnicalQuery::make(std::string text, std::set<std::string> tags) {
  if (text::trim(text).empty()) throw InvalidArgument("technical query text is empty");
  return TechnicalQuery{std::move(text), std::move(tags)};
}

SentenceId::SentenceId(int answer_index, int sentence_index) : answer_(answer_index), sentence_(sentence_index) {
  if (answer_index < 0) throw InvalidArgument("answer index must be non-negative");
  if (sentence_index < 1) throw InvalidArgument("sentence index is 1-based");
}

std::optional<SentenceId> SentenceId::parse(std::string_view s) {
  if (s.size() < 6 || s[0] != '#') return std::nullopt;
  const auto sep = s.find('_');
  if (sep == std::string_view::npos) return std::nullopt;
  auto number = [](std::string_view digits) -> std::optional<int> {
    if (digits.size() < 2 || digits.size() > 9) return std::nullopt;
    int v = 0;
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      v = v * 10 + (c - '0');
    }
    return v;
  };
  const auto a = number(s.substr(1, sep - 1));
  const auto b = number(s.substr(sep + 1));
  if (!a || !b || *b < 1) return std::nullopt;
  return SentenceId(*a, *b);
}

std::string SentenceId::str() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "#%02d_%02d", answer_, sentence_);
  return buf;
}

namespace {

using html::Token;
using html::TokenKind;

bool is_block_tag(std::string_view name) {
  static constexpr std::array<std::string_view, 22> kBlock = {
      "p",     "div",   "li",    "ul",      "ol",      "blockquote", "dl",    "dt",
      "dd",    "section", "body", "html",   "hr",      "tr",         "td",    "th",
      "tbody", "thead", "tfoot", "caption", "details", "summary"};
  return std::find(kBlock.begin(), kBlock.end(), name) != kBlock.end();
}

// Index of the end tag closing tokens[open], honouring nesting of the same
// name. Returns tokens.size() when unclosed.
std::size_t matching_end(const std::vector<Token>& tokens, std::size_t open) {
  const auto& name = tokens[open].name;
  int depth = 0;
  for (std::size_t k = open; k < tokens.size(); ++k) {
    if (tokens[k].name != name) continue;
    if (tokens[k].kind == TokenKind::kStartTag && !tokens[k].self_closing) ++depth;
    if (tokens[k].kind == TokenKind::kEndTag && --depth == 0) return k;
  }
  return tokens.size();
}

std::size_t offset_of(std::string_view whole, std::string_view part) {
  return static_cast<std::size_t>(part.data() - whole.data());
}

std::string visible_text(const std::vector<Token>& tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t k = begin; k < end && k < tokens.size(); ++k) {
    if (tokens[k].kind == TokenKind::kText) out += html::decode_entities(tokens[k].raw);
    if (tokens[k].kind == TokenKind::kStartTag && tokens[k].name == "br") out += ' ';
  }
  return out;
}

bool is_abbreviation(std::string_view word) {
  static constexpr std::array<std::string_view, 27> kAbbrev = {
      "e.g", "i.e", "eg", "ie", "etc", "vs", "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st",
      "no", "fig", "approx", "cf", "al", "inc", "ltd", "co", "resp", "ca", "viz", "esp", "jan"};
  const auto lower = text::to_lower(word);
  if (lower.size() == 1 && std::isalpha(static_cast<unsigned char>(lower[0]))) return true;
  return std::find(kAbbrev.begin(), kAbbrev.end(), lower) != kAbbrev.end();
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == ')' || c == '"' || c == '\'' || c == ']'; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool inline_end_tag(const Token& t) { return t.kind == TokenKind::kEndTag && !is_block_tag(t.name); }

// Splits one block (a contiguous run of inline content) into raw sentences.
// Text inside <code> and <a> is never split.
std::vector<std::string_view> split_block(std::string_view block) {
  const auto tokens = html::tokenize(block);
  std::vector<std::string_view> out;
  std::size_t sentence_start = 0;
  int protected_depth = 0;

  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const Token& tok = tokens[t];
    if (tok.kind == TokenKind::kStartTag && !tok.self_closing && (tok.name == "code" || tok.name == "a")) {
      ++protected_depth;
      continue;
    }
    if (tok.kind == TokenKind::kEndTag && (tok.name == "code" || tok.name == "a")) {
      protected_depth = std::max(0, protected_depth - 1);
      continue;
    }
    if (tok.kind != TokenKind::kText || protected_depth > 0) continue;

    const std::string_view s = tok.raw;
    for (std::size_t p = 0; p < s.size(); ++p) {
      if (!is_terminal(s[p])) continue;
      std::size_t q = p;
      while (q < s.size() && is_terminal(s[q])) ++q;
      if (s[p] == '.' && q - p == 1) {
        std::size_t w = p;
        while (w > 0 && !is_space(s[w - 1]) && s[w - 1] != '(') --w;
        const auto word = s.substr(w, p - w);
        if (!word.empty() && is_abbreviation(word)) {
          p = q - 1;
          continue;
        }
      }
      while (q < s.size() && is_closer(s[q])) ++q;

      // Cut point in block coordinates; swallow inline end tags that follow.
      std::size_t cut = offset_of(block, s) + q;
      std::size_t next_tok = t + 1;
      if (q == s.size()) {
        while (next_tok < tokens.size() && inline_end_tag(tokens[next_tok])) {
          cut = offset_of(block, tokens[next_tok].raw) + tokens[next_tok].raw.size();
          ++next_tok;
        }
      }

      // Require whitespace, then a plausible sentence start.
      bool saw_space = false;
      bool accept = false;
      std::size_t scan = cut;
      while (scan < block.size()) {
        const char c = block[scan];
        if (is_space(c)) {
          saw_space = true;
          ++scan;
          continue;
        }
        if (!saw_space) break;
        if (c == '<') {
          accept = true;
        } else {
          const auto uc = static_cast<unsigned char>(c);
          accept = std::isupper(uc) || std::isdigit(uc) || uc >= 0x80 || c == '"' || c == '\'' || c == '(' ||
                   c == '[' || c == '`' || c == '*';
        }
        break;
      }
      if (accept) {
        out.push_back(block.substr(sentence_start, cut - sentence_start));
        sentence_start = cut;
      }
      p = q - 1;
    }
  }
  if (sentence_start < block.size()) out.push_back(block.substr(sentence_start));
  return out;
}

struct Segment {
  std::string raw;
  bool placeholder_only = false;
};

void classify_and_push(std::string_view raw, std::vector<Segment>& out) {
  raw = text::trim(raw);
  if (raw.empty()) return;
  const auto tokens = html::tokenize(raw);
  bool has_img = false;
  bool has_text = false;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::kStartTag && t.name == "img") has_img = true;
    if (t.kind == TokenKind::kText && !text::trim(html::decode_entities(t.raw)).empty()) has_text = true;
  }
  if (!has_img && !has_text) return;
  out.push_back({std::string(raw), has_img && !has_text});
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view body) {
  const auto tokens = html::tokenize(body);
  std::vector<Segment> segments;

  std::size_t block_begin = std::string_view::npos;
  std::size_t block_end = 0;
  auto flush = [&] {
    if (block_begin != std::string_view::npos) {
      for (auto piece : split_block(body.substr(block_begin, block_end - block_begin)))
        classify_and_push(piece, segments);
    }
    block_begin = std::string_view::npos;
  };
  auto slice_end = [&](std::size_t token_index) {
    return token_index < tokens.size() ? offset_of(body, tokens[token_index].raw) + tokens[token_index].raw.size()
                                       : body.size();
  };

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& tok = tokens[i];
    const bool start = tok.kind == TokenKind::kStartTag;
    if (start && (tok.name == "pre" || tok.name == "table")) {
      flush();
      const auto close = matching_end(tokens, i);
      const auto b = offset_of(body, tok.raw);
      segments.push_back({std::string(body.substr(b, slice_end(close) - b)), true});
      i = close;
      continue;
    }
    if (start && html::is_heading(tok.name)) {
      flush();
      const auto close = matching_end(tokens, i);
      const auto inner_begin = offset_of(body, tok.raw) + tok.raw.size();
      const auto inner_end = close < tokens.size() ? offset_of(body, tokens[close].raw) : body.size();
      if (text::word_count(visible_text(tokens, i + 1, close)) > kHeadingMinWords)
        segments.push_back({std::string(text::trim(body.substr(inner_begin, inner_end - inner_begin))), false});
      i = close;
      continue;
    }
    if ((start || tok.kind == TokenKind::kEndTag) && is_block_tag(tok.name)) {
      flush();
      continue;
    }
    if (block_begin == std::string_view::npos) block_begin = offset_of(body, tok.raw);
    block_end = offset_of(body, tok.raw) + tok.raw.size();
  }
  flush();

  std::vector<std::string> sentences;
  for (auto& seg : segments) {
    if (seg.placeholder_only && !sentences.empty()) {
      sentences.back() += ' ';
      sentences.back() += seg.raw;
    } else {
      sentences.push_back(std::move(seg.raw));
    }
  }
  return sentences;
}

std::optional<std::string> clean_sentence(std::string_view raw) {
  const auto tokens = html::tokenize(raw);
  std::string out;
  bool saw_link = false;

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& tok = tokens[i];
    switch (tok.kind) {
      case TokenKind::kText:
        out += html::decode_entities(tok.raw);
        break;
      case TokenKind::kComment:
        break;
      case TokenKind::kEndTag:
        if (is_block_tag(tok.name) || tok.name == "br") out += ' ';
        break;
      case TokenKind::kStartTag: {
        if (tok.name == "img") {
          out += kFigurePlaceholder;
        } else if (tok.name == "a" && !tok.self_closing) {
          const auto close = matching_end(tokens, i);
          bool wraps_image = false;
          for (std::size_t k = i + 1; k < close && k < tokens.size(); ++k)
            wraps_image = wraps_image || (tokens[k].kind == TokenKind::kStartTag && tokens[k].name == "img");
          if (wraps_image) {
            out += kFigurePlaceholder;
          } else {
            out += kLinkPlaceholder;
            saw_link = true;
          }
          i = close;
        } else if ((tok.name == "pre" || tok.name == "table") && !tok.self_closing) {
          out += ' ';
          out += tok.name == "pre" ? kCodePlaceholder : kTablePlaceholder;
          out += ' ';
          i = matching_end(tokens, i);
        } else if (tok.name == "code" && !tok.self_closing) {
          const auto close = matching_end(tokens, i);
          const auto inner = visible_text(tokens, i + 1, close);
          if (!text::trim(inner).empty()) {
            out += '`';
            out += inner;
            out += '`';
          }
          i = close;
        } else if (is_block_tag(tok.name) || tok.name == "br") {
          out += ' ';
        }
        break;
      }
    }
  }

  auto cleaned = text::collapse_whitespace(out);
  if (cleaned.empty()) return std::nullopt;

  if (saw_link || cleaned.find(kLinkPlaceholder) != std::string::npos) {
    std::string rest = cleaned;
    for (auto pos = rest.find(kLinkPlaceholder); pos != std::string::npos; pos = rest.find(kLinkPlaceholder))
      rest.erase(pos, kLinkPlaceholder.size());
    const bool any_word = std::any_of(rest.begin(), rest.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
    });
    if (!any_word) return std::nullopt;
  }
  return cleaned;
}

bool has_text_content(std::string_view cleaned) {
  std::string rest(cleaned);
  for (auto placeholder : {kLinkPlaceholder, kCodePlaceholder, kTablePlaceholder, kFigurePlaceholder}) {
    for (auto pos = rest.find(placeholder); pos != std::string::npos; pos = rest.find(placeholder))
      rest.erase(pos, placeholder.size());
  }
  return std::any_of(rest.begin(), rest.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
  });
}

AnnotationUnit build_unit(TechnicalQuery query, std::vector<Answer> answers) {
  if (answers.empty()) throw InvalidArgument("annotation unit needs at least one answer");
  std::unordered_set<int> seen;
  for (const auto& a : answers) {
    if (a.answer_index < 0) throw InvalidArgument("negative answer index");
    if (!seen.insert(a.answer_index).second)
      throw InvalidArgument("duplicate answer index " + std::to_string(a.answer_index));
  }

  AnnotationUnit unit{std::move(query), std::move(answers), {}};
  for (const auto& answer : unit.answers) {
    int position = 0;
    for (const auto& raw : split_sentences(answer.body_html)) {
      auto cleaned = clean_sentence(raw);
      if (!cleaned) continue;
      unit.sentences.push_back({SentenceId(answer.answer_index, ++position), std::move(*cleaned)});
    }
  }
  return unit;
}

// ---------------------------------------------------------------------------
// JSON I/O

namespace {

json query_to_json(const TechnicalQuery& q) { return {{"text", q.text}, {"tags", q.tags}}; }

json sentences_to_json(const std::vector<AnswerSentence>& sentences) {
  json arr = json::array();
  for (const auto& s : sentences) arr.push_back({{"id", s.id.str()}, {"text", s.text}});
  return arr;
}

const json& require(const json& obj, const char* key, json::value_t type, const std::string& where, long entry) {
  if (!obj.is_object() || !obj.contains(key)) throw SchemaError(where + ": missing field \"" + key + "\"", entry);
  const json& v = obj.at(key);
  const bool number_ok = type == json::value_t::number_integer &&
                         (v.type() == json::value_t::number_unsigned || v.type() == json::value_t::number_integer);
  if (v.type() != type && !number_ok)
    throw SchemaError(where + ": field \"" + key + "\" has wrong type", entry);
  return v;
}

TechnicalQuery query_from_json(const json& obj, const std::string& where, long entry) {
  const json& q = require(obj, "query", json::value_t::object, where, entry);
  const auto& text = require(q, "text", json::value_t::string, where + ".query", entry).get_ref<const std::string&>();
  if (text::trim(text).empty()) throw SchemaError(where + ": query text is empty", entry);
  std::set<std::string> tags;
  if (q.contains("tags")) {
    const json& t = require(q, "tags", json::value_t::array, where + ".query", entry);
    for (const auto& tag : t) {
      if (!tag.is_string()) throw SchemaError(where + ": query tag is not a string", entry);
      tags.insert(tag.get<std::string>());
    }
  }
  return TechnicalQuery{text, std::move(tags)};
}

std::vector<AnswerSentence> sentences_from_json(const json& arr, const std::string& where, long entry) {
  std::vector<AnswerSentence> out;
  std::set<SentenceId> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string here = where + "[" + std::to_string(i) + "]";
    const auto& id_text = require(arr[i], "id", json::value_t::string, here, entry).get_ref<const std::string&>();
    const auto& text = require(arr[i], "text", json::value_t::string, here, entry).get_ref<const std::string&>();
    const auto id = SentenceId::parse(id_text);
    if (!id) throw SchemaError(here + ": malformed sentence id \"" + id_text + "\"", entry);
    if (!seen.insert(*id).second) throw SchemaError(here + ": duplicate sentence id " + id_text, entry);
    if (text::trim(text).empty()) throw SchemaError(here + ": empty sentence text", entry);
    out.push_back({*id, text});
  }
  return out;
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

json unit_to_json(const AnnotationUnit& unit) {
  json answers = json::array();
  for (const auto& a : unit.answers) {
    answers.push_back({{"answer_index", a.answer_index},
                       {"body_html", a.body_html},
                       {"vote_score", a.vote_score},
                       {"source_post_id", a.source_post_id}});
  }
  return {{"query", query_to_json(unit.query)}, {"answers", answers}, {"sentences", sentences_to_json(unit.sentences)}};
}

AnnotationUnit unit_from_json(const json& obj, long index) {
  const std::string where = "unit " + std::to_string(index);
  AnnotationUnit unit;
  unit.query = query_from_json(obj, where, index);
  if (obj.contains("answers")) {
    const json& arr = require(obj, "answers", json::value_t::array, where, index);
    std::unordered_set<int> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string here = where + ".answers[" + std::to_string(i) + "]";
      Answer a;
      a.answer_index = require(arr[i], "answer_index", json::value_t::number_integer, here, index).get<int>();
      a.body_html = require(arr[i], "body_html", json::value_t::string, here, index).get<std::string>();
      if (arr[i].contains("vote_score")) a.vote_score = arr[i].at("vote_score").get<std::int64_t>();
      if (arr[i].contains("source_post_id")) a.source_post_id = arr[i].at("source_post_id").get<std::int64_t>();
      if (!seen.insert(a.answer_index).second) throw SchemaError(here + ": duplicate answer_index", index);
      unit.answers.push_back(std::move(a));
    }
  }
  unit.sentences =
      sentences_from_json(require(obj, "sentences", json::value_t::array, where, index), where + ".sentences", index);
  return unit;
}

}  // namespace

std::vector<BenchmarkEntry> parse_benchmark(std::string_view json_text) {
  const json doc = parse_json(json_text, "benchmark");
  const json& arr = require(doc, "entries", json::value_t::array, "benchmark", -1);
  std::vector<BenchmarkEntry> entries;
  entries.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const long idx = static_cast<long>(i);
    const std::string where = "entry " + std::to_string(i);
    BenchmarkEntry e;
    e.query = query_from_json(arr[i], where, idx);
    e.candidates =
        sentences_from_json(require(arr[i], "candidates", json::value_t::array, where, idx), where + ".candidates", idx);
    const json& refs = require(arr[i], "references", json::value_t::array, where, idx);
    if (refs.empty()) throw SchemaError(where + ": needs at least one reference summary", idx);
    for (std::size_t r = 0; r < refs.size(); ++r) {
      const std::string here = where + ".references[" + std::to_string(r) + "]";
      if (!refs[r].is_array()) throw SchemaError(here + ": reference is not a list of sentences", idx);
      if (refs[r].size() != kReferenceSentences) {
        throw SchemaError(here + ": reference has " + std::to_string(refs[r].size()) + " sentences (expected " +
                              std::to_string(kReferenceSentences) + ")",
                          idx);
      }
      ReferenceSummary ref;
      for (const auto& s : refs[r]) {
        if (!s.is_string()) throw SchemaError(here + ": reference sentence is not a string", idx);
        ref.push_back(s.get<std::string>());
      }
      e.references.push_back(std::move(ref));
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::string dump_benchmark(const std::vector<BenchmarkEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries) {
    arr.push_back({{"query", query_to_json(e.query)},
                   {"candidates", sentences_to_json(e.candidates)},
                   {"references", e.references}});
  }
  return json{{"entries", arr}}.dump(2) + "\n";
}

std::vector<BenchmarkEntry> load_benchmark(const std::filesystem::path& path) {
  try {
    return parse_benchmark(read_file(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what(), e.entry_index());
  }
}

void save_benchmark(const std::filesystem::path& path, const std::vector<BenchmarkEntry>& entries) {
  write_file(path, dump_benchmark(entries));
}

std::vector<AnnotationUnit> parse_units(std::string_view json_text) {
  const json doc = parse_json(json_text, "units");
  std::vector<AnnotationUnit> units;
  if (doc.is_object() && doc.contains("units")) {
    const json& arr = require(doc, "units", json::value_t::array, "units", -1);
    for (std::size_t i = 0; i < arr.size(); ++i) units.push_back(unit_from_json(arr[i], static_cast<long>(i)));
  } else {
    units.push_back(unit_from_json(doc, 0));
  }
  return units;
}

std::string dump_units(const std::vector<AnnotationUnit>& units) {
  json arr = json::array();
  for (const auto& u : units) arr.push_back(unit_to_json(u));
  return json{{"units", arr}}.dump(2) + "\n";
}

std::vector<AnnotationUnit> load_units(const std::filesystem::path& path) {
  try {
    return parse_units(read_file(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what(), e.entry_index());
  }
}

void save_units(const std::filesystem::path& path, const std::vector<AnnotationUnit>& units) {
  write_file(path, dump_units(units));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace answersum
