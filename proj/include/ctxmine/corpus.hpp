#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ctxmine/types.hpp"

namespace ctxmine {

struct Tweet {
  std::string id;
  std::string text;       // as ingested
  std::string norm_text;  // lowercased, mentions stripped, whitespace folded
  std::int64_t created_at = 0;  // seconds since epoch (UTC)
  std::string conversation_id;
  std::string author_id;
  bool is_reply = false;
  bool is_support = false;
};

struct Conversation {
  std::string id;
  std::vector<Tweet> tweets;  // ascending created_at, ties broken by tweet id
};

/// A labelled span over the normalized text of one tweet. Offsets count
/// Unicode scalar values.
struct TruthLabel {
  std::string tweet_id;
  ItemType item_type = ItemType::platform;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
};

struct Token {
  std::string value;
  std::size_t char_start = 0;  // codepoint offsets into the normalized text
  std::size_t char_end = 0;
};

/// Lowercases, removes line breaks and runs of spaces, strips "@handle"
/// mentions of the given support accounts (handles without "@"), and trims.
/// Idempotent.
std::string normalize_text(std::string_view raw, const std::set<std::string>& support_handles);

/// Splits normalized text into tokens. Whitespace-delimited chunks are
/// stripped of edge punctuation; interior punctuation ("8.0.1", "s9+",
/// "t-mobile", "i'm") is preserved. Stripped or standalone punctuation is
/// dropped, except that a punctuation character immediately preceding a
/// token that starts with a digit is kept as its own token so that version
/// matching can see it as the previous token.
std::vector<Token> tokenize(std::string_view normalized);

/// Loads a JSONL tweet file, groups tweets into chronologically ordered
/// conversations, and normalizes every text.
std::vector<Conversation> load_conversations(const std::string& path,
                                             const std::set<std::string>& support_handles);

/// Loads a JSONL truthset and validates each label against the normalized
/// text of its tweet (offset range and surface slice).
std::vector<TruthLabel> load_truthset(const std::string& path,
                                      const std::vector<Conversation>& corpus);

/// Parses "YYYY-MM-DDTHH:MM:SS" with optional fraction and "Z" / "+hh:mm"
/// offset into epoch seconds. Throws Error on malformed input.
std::int64_t parse_iso8601(std::string_view s);

}  // namespace ctxmine
