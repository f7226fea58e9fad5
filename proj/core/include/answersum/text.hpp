#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace answersum::text {

// Lowercases ASCII, splits on anything that is not alphanumeric. Bytes >= 0x80
// count as word characters so UTF-8 words stay whole. Backtick-delimited
// inline code spans are kept intact as one token, backticks included.
std::vector<std::string> tokenize(std::string_view s);

// Same split rule without the inline-code exception. Used for ROUGE.
std::vector<std::string> tokenize_plain(std::string_view s);

// Whitespace-delimited token count.
std::size_t word_count(std::string_view s);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

// Collapses runs of ASCII whitespace into single spaces and trims both ends.
std::string collapse_whitespace(std::string_view s);

}  // namespace answersum::text
