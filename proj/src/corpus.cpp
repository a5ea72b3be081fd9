#include "ctxmine/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "ctxmine/error.hpp"
#include "ctxmine/text.hpp"

namespace ctxmine {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_handle_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

// Punctuation stripped from token edges. Interior occurrences survive.
bool is_edge_punct(char32_t c) {
  switch (c) {
    case U',': case U'.': case U'!': case U'?': case U':': case U';':
    case U'\'': case U'"': case U'(': case U')': case U'[': case U']':
    case U'{': case U'}':
    case U'‘': case U'’': case U'“': case U'”':
    case U'…':
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string normalize_text(std::string_view raw, const std::set<std::string>& support_handles) {
  if (!text::is_valid_utf8(raw)) throw Error("invalid UTF-8 in text");

  // Lowercase ASCII bytes; multi-byte sequences pass through untouched.
  std::string s(raw);
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }

  // Strip @-mentions of the configured support handles. A mention is the
  // full run of handle characters after '@'; longer handles are kept.
  std::string no_mentions;
  no_mentions.reserve(s.size());
  for (size_t i = 0; i < s.size();) {
    if (s[i] == '@') {
      size_t j = i + 1;
      while (j < s.size() && is_handle_char(s[j])) ++j;
      if (j > i + 1 && support_handles.count(s.substr(i + 1, j - i - 1))) {
        i = j;
        continue;
      }
    }
    no_mentions.push_back(s[i]);
    ++i;
  }

  // Fold all whitespace to single spaces and trim.
  std::string out;
  out.reserve(no_mentions.size());
  bool pending_space = false;
  for (char c : no_mentions) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<Token> tokenize(std::string_view normalized) {
  std::u32string cps = text::decode_utf8(normalized);

  struct Piece {
    std::size_t start, end;
    bool punct;  // single stripped/standalone punctuation character
  };
  std::vector<Piece> pieces;

  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    if (cps[i] == U' ') {
      ++i;
      continue;
    }
    std::size_t e = i;
    while (e < n && cps[e] != U' ') ++e;
    std::size_t ls = i;
    while (ls < e && is_edge_punct(cps[ls])) ++ls;
    std::size_t re = e;
    while (re > ls && is_edge_punct(cps[re - 1])) --re;
    for (std::size_t k = i; k < ls; ++k) pieces.push_back({k, k + 1, true});
    if (ls < re) pieces.push_back({ls, re, false});
    for (std::size_t k = re; k < e; ++k) pieces.push_back({k, k + 1, true});
    i = e;
  }

  std::vector<Token> tokens;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const Piece& piece = pieces[p];
    if (piece.punct) {
      // kept only when the next piece is a word starting with a digit
      if (p + 1 >= pieces.size()) continue;
      const Piece& next = pieces[p + 1];
      if (next.punct || !text::is_ascii_digit(cps[next.start])) continue;
    }
    tokens.push_back(Token{
        text::encode_utf8(std::u32string_view(cps).substr(piece.start, piece.end - piece.start)),
        piece.start, piece.end});
  }
  return tokens;
}

std::int64_t parse_iso8601(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS[.fff][Z|+hh:mm|-hh:mm]
  auto fail = [&]() -> std::int64_t {
    throw Error("malformed ISO-8601 timestamp: '" + std::string(s) + "'");
  };
  auto digits = [&](size_t pos, size_t count) -> long long {
    if (pos + count > s.size()) fail();
    long long v = 0;
    for (size_t k = 0; k < count; ++k) {
      char c = s[pos + k];
      if (c < '0' || c > '9') fail();
      v = v * 10 + (c - '0');
    }
    return v;
  };

  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':') {
    fail();
  }
  long long year = digits(0, 4), month = digits(5, 2), day = digits(8, 2);
  long long hour = digits(11, 2), minute = digits(14, 2), second = digits(17, 2);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    fail();
  }

  size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    size_t frac_start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == frac_start) fail();
  }
  long long offset = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      int sign = s[pos] == '+' ? 1 : -1;
      long long oh = digits(pos + 1, 2);
      if (pos + 3 >= s.size() || s[pos + 3] != ':') fail();
      long long om = digits(pos + 4, 2);
      offset = sign * (oh * 3600 + om * 60);
      pos += 6;
    }
  }
  if (pos != s.size()) fail();

  // days since epoch via civil-date arithmetic (Howard Hinnant's algorithm)
  long long y = year;
  long long m = month;
  y -= m <= 2;
  long long era = (y >= 0 ? y : y - 399) / 400;
  unsigned yoe = static_cast<unsigned>(y - era * 400);
  unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1);
  unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  long long days = era * 146097 + static_cast<long long>(doe) - 719468;

  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

namespace {

using nlohmann::json;

std::string require_string(const json& j, const char* field, size_t line_no) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) {
    throw Error("line " + std::to_string(line_no) + ": missing or non-string field '" +
                field + "'");
  }
  return it->get<std::string>();
}

bool require_bool(const json& j, const char* field, size_t line_no) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_boolean()) {
    throw Error("line " + std::to_string(line_no) + ": missing or non-boolean field '" +
                field + "'");
  }
  return it->get<bool>();
}

}  // namespace

std::vector<Conversation> load_conversations(const std::string& path,
                                             const std::set<std::string>& support_handles) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open conversations file: " + path);

  std::vector<Tweet> tweets;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(path + ": line " + std::to_string(line_no) + ": malformed JSON");
    }
    Tweet t;
    t.id = require_string(j, "id", line_no);
    t.text = require_string(j, "text", line_no);
    t.conversation_id = require_string(j, "conversation_id", line_no);
    t.author_id = require_string(j, "author_id", line_no);
    t.is_reply = require_bool(j, "is_reply", line_no);
    t.is_support = require_bool(j, "is_support", line_no);
    t.created_at = parse_iso8601(require_string(j, "created_at", line_no));
    if (t.id.empty()) throw Error(path + ": line " + std::to_string(line_no) + ": empty tweet id");
    if (t.conversation_id.empty()) {
      throw Error(path + ": line " + std::to_string(line_no) + ": empty conversation id");
    }
    if (!seen_ids.insert(t.id).second) {
      throw Error(path + ": line " + std::to_string(line_no) + ": duplicate tweet id '" + t.id +
                  "'");
    }
    try {
      t.norm_text = normalize_text(t.text, support_handles);
    } catch (const Error& e) {
      throw Error(path + ": tweet '" + t.id + "': " + e.what());
    }
    tweets.push_back(std::move(t));
  }

  std::map<std::string, Conversation> grouped;
  for (Tweet& t : tweets) {
    Conversation& conv = grouped[t.conversation_id];
    conv.id = t.conversation_id;
    conv.tweets.push_back(std::move(t));
  }

  std::vector<Conversation> out;
  out.reserve(grouped.size());
  for (auto& [id, conv] : grouped) {
    std::stable_sort(conv.tweets.begin(), conv.tweets.end(), [](const Tweet& a, const Tweet& b) {
      if (a.created_at != b.created_at) return a.created_at < b.created_at;
      return a.id < b.id;
    });
    out.push_back(std::move(conv));
  }
  return out;
}

std::vector<TruthLabel> load_truthset(const std::string& path,
                                      const std::vector<Conversation>& corpus) {
  std::unordered_map<std::string, const Tweet*> by_id;
  for (const Conversation& conv : corpus) {
    for (const Tweet& t : conv.tweets) by_id[t.id] = &t;
  }

  std::ifstream in(path);
  if (!in) throw Error("cannot open truthset file: " + path);

  std::vector<TruthLabel> labels;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(path + ": line " + std::to_string(line_no) + ": malformed JSON");
    }
    TruthLabel l;
    l.tweet_id = require_string(j, "tweet_id", line_no);
    std::string type_str = require_string(j, "item_type", line_no);
    auto type = item_type_from_string(type_str);
    if (!type) {
      throw Error(path + ": line " + std::to_string(line_no) + ": unknown item_type '" +
                  type_str + "'");
    }
    l.item_type = *type;
    if (!j.contains("start") || !j.contains("end") || !j["start"].is_number_unsigned() ||
        !j["end"].is_number_unsigned()) {
      throw Error(path + ": line " + std::to_string(line_no) + ": missing start/end offsets");
    }
    l.start = j["start"].get<std::size_t>();
    l.end = j["end"].get<std::size_t>();
    l.surface = require_string(j, "surface", line_no);

    auto it = by_id.find(l.tweet_id);
    if (it == by_id.end()) {
      throw Error(path + ": label for unknown tweet '" + l.tweet_id + "'");
    }
    const std::string& norm = it->second->norm_text;
    std::size_t norm_len = text::codepoint_length(norm);
    if (l.start >= l.end || l.end > norm_len) {
      throw Error(path + ": tweet '" + l.tweet_id + "': label offsets [" +
                  std::to_string(l.start) + ", " + std::to_string(l.end) +
                  ") out of range for text of length " + std::to_string(norm_len));
    }
    std::string slice = text::codepoint_slice(norm, l.start, l.end);
    if (slice != l.surface) {
      throw Error(path + ": tweet '" + l.tweet_id + "': label surface '" + l.surface +
                  "' does not match text slice '" + slice + "'");
    }
    labels.push_back(std::move(l));
  }
  return labels;
}

}  // namespace ctxmine
