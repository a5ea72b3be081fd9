#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ctxmine/corpus.hpp"
#include "ctxmine/lexicon.hpp"
#include "ctxmine/types.hpp"

namespace ctxmine {

/// An extracted span. Offsets are codepoints into the normalized tweet text
/// and surface always equals that slice. candidate_labels is populated for
/// version items only.
struct ContextItem {
  std::string tweet_id;
  ItemType item_type = ItemType::platform;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string surface;
  std::string canonical;  // the list entry the match maps to
  PlatformTag platform_tag = PlatformTag::unknown;
  std::set<VersionLabel> candidate_labels;
  bool conflicted = false;
};

/// keyword -> alternative spellings, deduplicated across keywords
using AltSpellingMap = std::map<std::string, std::set<std::string>>;

/// A compiled keyword list: the keywords plus their alternative spellings,
/// ordered longest-first so that a longer alternative sharing a prefix is
/// always tried before the prefix.
class PatternSet {
 public:
  static PatternSet build(ItemType item_type, PlatformTag platform_tag,
                          const std::set<std::string>& keywords,
                          const AltSpellingMap& alt_spellings = {});

  const std::vector<std::string>& alternatives() const { return alternatives_; }
  const std::string& canonical_for(const std::string& alternative) const;
  ItemType item_type() const { return item_type_; }
  PlatformTag platform_tag() const { return platform_tag_; }

 private:
  friend std::vector<ContextItem> find_all(const PatternSet&, std::string_view,
                                           const std::string&);

  ItemType item_type_ = ItemType::platform;
  PlatformTag platform_tag_ = PlatformTag::unknown;
  std::vector<std::string> alternatives_;            // length-desc, ties lexicographic
  std::vector<std::u32string> decoded_;              // parallel to alternatives_
  std::map<std::string, std::string> canonical_;     // alternative -> keyword
  std::map<char32_t, std::vector<std::size_t>> by_first_char_;
};

/// All non-overlapping matches, scanning left to right, longest alternative
/// first at each position. Matches are bounded by word-ish boundaries: not
/// immediately preceded or followed by a letter or digit ("+" at the end of
/// an alternative is part of the matched word).
std::vector<ContextItem> find_all(const PatternSet& patterns, std::string_view normalized_text,
                                  const std::string& tweet_id = {});

/// Compiled platform and device pattern sets for both platforms; when spans
/// nest across sets the longer span wins.
class PlatformDeviceExtractor {
 public:
  PlatformDeviceExtractor(const Lexicon& lexicon, const AltSpellingMap& alt_spellings);

  std::vector<ContextItem> extract(const Tweet& tweet) const;

 private:
  std::vector<PatternSet> pattern_sets_;
};

std::vector<ContextItem> extract_platform_device(const Lexicon& lexicon,
                                                 const AltSpellingMap& alt_spellings,
                                                 const Tweet& tweet);

}  // namespace ctxmine
