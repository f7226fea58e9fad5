#pragma once

// Lenient tokenizer for Stack Overflow post bodies. Only tag names HTML
// actually uses are treated as markup; anything else that looks like a tag
// (e.g. "List<String>" after entity decoding) stays text.

#include <string>
#include <string_view>
#include <vector>

namespace answersum::html {

enum class TokenKind { kText, kStartTag, kEndTag, kComment };

struct Token {
  TokenKind kind;
  std::string name;       // lowercase tag name; empty for text/comment
  std::string_view raw;   // slice of the input
  bool self_closing = false;
};

std::vector<Token> tokenize(std::string_view input);

// Decodes named (amp, lt, gt, quot, apos, nbsp) and numeric entities.
// Unknown entities are left as written.
std::string decode_entities(std::string_view s);

bool is_void_element(std::string_view name);
bool is_heading(std::string_view name);

}  // namespace answersum::html
