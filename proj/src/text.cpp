#include "ctxmine/text.hpp"

#include "ctxmine/error.hpp"

namespace ctxmine::text {

namespace {

// Decodes one codepoint starting at s[i]; returns false on malformed input.
bool decode_one(std::string_view s, std::size_t& i, char32_t& out) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    out = b0;
    i += 1;
    return true;
  }
  int len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return false;
  }
  if (i + len > s.size()) return false;
  for (int k = 1; k < len; ++k) {
    unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return false;
    cp = (cp << 6) | (b & 0x3F);
  }
  // reject overlong encodings and surrogates
  static constexpr char32_t min_for_len[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < min_for_len[len]) return false;
  if (cp >= 0xD800 && cp <= 0xDFFF) return false;
  if (cp > 0x10FFFF) return false;
  out = cp;
  i += len;
  return true;
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp;
    if (!decode_one(s, i, cp)) throw Error("invalid UTF-8 at byte " + std::to_string(i));
    out.push_back(cp);
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
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
  return out;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    if (!decode_one(s, i, cp)) return false;
  }
  return true;
}

std::size_t codepoint_length(std::string_view s) {
  return decode_utf8(s).size();
}

std::string codepoint_slice(std::string_view s, std::size_t start, std::size_t end) {
  std::u32string decoded = decode_utf8(s);
  if (start > end || end > decoded.size()) {
    throw Error("codepoint slice [" + std::to_string(start) + ", " + std::to_string(end) +
                ") out of range for text of length " + std::to_string(decoded.size()));
  }
  return encode_utf8(std::u32string_view(decoded).substr(start, end - start));
}

}  // namespace ctxmine::text
