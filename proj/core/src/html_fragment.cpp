#include "html_fragment.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>

namespace answersum::html {
namespace {

constexpr std::array<std::string_view, 47> kKnownTags = {
    "a",      "abbr",  "b",      "blockquote", "body",   "br",     "caption", "code",
    "dd",     "del",   "details", "div",       "dl",     "dt",     "em",      "h1",
    "h2",     "h3",    "h4",     "h5",         "h6",     "hr",     "html",    "i",
    "img",    "ins",   "kbd",    "li",         "ol",     "p",      "pre",     "s",
    "section", "span", "strike", "strong",     "sub",    "summary", "sup",    "table",
    "tbody",  "td",    "tfoot",  "th",         "thead",  "tr",     "ul"};

bool is_known_tag(std::string_view name) {
  return std::find(kKnownTags.begin(), kKnownTags.end(), name) != kKnownTags.end();
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Returns the end of a tag starting at `pos` ('<'), or npos. Quoted attribute
// values may contain '>'.
std::size_t find_tag_end(std::string_view s, std::size_t pos) {
  char quote = 0;
  for (std::size_t i = pos + 1; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      return i;
    }
  }
  return std::string_view::npos;
}

}  // namespace

bool is_void_element(std::string_view name) { return name == "br" || name == "hr" || name == "img"; }

bool is_heading(std::string_view name) {
  return name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6';
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t text_start = 0;
  auto flush_text = [&](std::size_t end) {
    if (end > text_start) tokens.push_back({TokenKind::kText, {}, s.substr(text_start, end - text_start)});
  };

  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '<') {
      ++i;
      continue;
    }
    if (s.substr(i, 4) == "<!--") {
      const auto close = s.find("-->", i + 4);
      const std::size_t end = close == std::string_view::npos ? s.size() : close + 3;
      flush_text(i);
      tokens.push_back({TokenKind::kComment, {}, s.substr(i, end - i)});
      i = end;
      text_start = i;
      continue;
    }
    const bool closing = i + 1 < s.size() && s[i + 1] == '/';
    std::size_t name_begin = i + (closing ? 2 : 1);
    std::size_t name_end = name_begin;
    while (name_end < s.size() && std::isalnum(static_cast<unsigned char>(s[name_end]))) ++name_end;
    std::string name;
    for (std::size_t k = name_begin; k < name_end; ++k)
      name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[k]))));
    const bool name_terminated =
        name_end < s.size() && (s[name_end] == '>' || s[name_end] == '/' ||
                                std::isspace(static_cast<unsigned char>(s[name_end])));
    if (name.empty() || !name_terminated || !is_known_tag(name)) {
      ++i;
      continue;
    }
    const auto end = find_tag_end(s, i);
    if (end == std::string_view::npos) {
      ++i;
      continue;
    }
    flush_text(i);
    Token tok{closing ? TokenKind::kEndTag : TokenKind::kStartTag, name, s.substr(i, end - i + 1)};
    tok.self_closing = !closing && (s[end - 1] == '/' || is_void_element(name));
    tokens.push_back(std::move(tok));
    i = end + 1;
    text_start = i;
  }
  flush_text(s.size());
  return tokens;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    const auto body = s.substr(i + 1, semi - i - 1);
    bool decoded = true;
    if (body == "amp") {
      out.push_back('&');
    } else if (body == "lt") {
      out.push_back('<');
    } else if (body == "gt") {
      out.push_back('>');
    } else if (body == "quot") {
      out.push_back('"');
    } else if (body == "apos" || body == "#39") {
      out.push_back('\'');
    } else if (body == "nbsp") {
      out.push_back(' ');
    } else if (body.size() > 1 && body[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = body[1] == 'x' || body[1] == 'X';
      const auto digits = body.substr(hex ? 2 : 1);
      decoded = !digits.empty();
      for (char d : digits) {
        const int v = std::isdigit(static_cast<unsigned char>(d))            ? d - '0'
                      : hex && std::isxdigit(static_cast<unsigned char>(d)) ? std::tolower(d) - 'a' + 10
                                                                            : -1;
        if (v < 0 || cp > 0x10FFFF) {
          decoded = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
      }
      if (decoded && cp > 0 && cp <= 0x10FFFF) {
        append_utf8(out, cp);
      } else {
        decoded = false;
      }
    } else {
      decoded = false;
    }
    if (decoded) {
      i = semi;
    } else {
      out.push_back('&');
    }
  }
  return out;
}

}  // namespace answersum::html
