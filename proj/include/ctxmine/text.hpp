#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace ctxmine::text {

/// Decodes UTF-8, throwing ctxmine::Error on malformed input. All character
/// offsets in this project count Unicode scalar values, so processing happens
/// on the decoded form.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
bool is_valid_utf8(std::string_view s);

std::size_t codepoint_length(std::string_view s);

/// Slice [start, end) in codepoints of a UTF-8 string.
std::string codepoint_slice(std::string_view s, std::size_t start, std::size_t end);

inline bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }
inline bool is_ascii_alpha(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}
inline bool is_ascii_alnum(char32_t c) { return is_ascii_digit(c) || is_ascii_alpha(c); }
inline char32_t ascii_lower(char32_t c) {
  return (c >= U'A' && c <= U'Z') ? c + (U'a' - U'A') : c;
}

}  // namespace ctxmine::text
