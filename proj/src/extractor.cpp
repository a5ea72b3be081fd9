#include "ctxmine/extractor.hpp"

#include <algorithm>

#include "ctxmine/error.hpp"
#include "ctxmine/text.hpp"

namespace ctxmine {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

PatternSet PatternSet::build(ItemType item_type, PlatformTag platform_tag,
                             const std::set<std::string>& keywords,
                             const AltSpellingMap& alt_spellings) {
  if (keywords.empty()) throw Error("pattern set needs at least one keyword");

  PatternSet set;
  set.item_type_ = item_type;
  set.platform_tag_ = platform_tag;

  for (const std::string& keyword : keywords) {
    std::string k = lowercase(keyword);
    if (k.empty()) throw Error("pattern set keyword must be non-empty");
    set.canonical_[k] = k;
  }
  for (const auto& [keyword, spellings] : alt_spellings) {
    std::string k = lowercase(keyword);
    if (!keywords.count(k)) continue;
    for (const std::string& spelling : spellings) {
      std::string s = lowercase(spelling);
      if (s.empty()) continue;
      // keywords beat their spellings; a spelling claimed by two keywords
      // goes to the lexicographically smaller one (first insertion wins)
      set.canonical_.emplace(s, k);
    }
  }

  for (const auto& [alternative, keyword] : set.canonical_) set.alternatives_.push_back(alternative);
  std::vector<std::u32string> decoded;
  decoded.reserve(set.alternatives_.size());
  for (const std::string& a : set.alternatives_) decoded.push_back(text::decode_utf8(a));

  std::vector<std::size_t> order(set.alternatives_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (decoded[a].size() != decoded[b].size()) return decoded[a].size() > decoded[b].size();
    return set.alternatives_[a] < set.alternatives_[b];
  });

  std::vector<std::string> sorted_alts;
  for (std::size_t i : order) {
    sorted_alts.push_back(set.alternatives_[i]);
    set.decoded_.push_back(decoded[i]);
  }
  set.alternatives_ = std::move(sorted_alts);

  for (std::size_t i = 0; i < set.decoded_.size(); ++i) {
    set.by_first_char_[set.decoded_[i][0]].push_back(i);
  }
  return set;
}

const std::string& PatternSet::canonical_for(const std::string& alternative) const {
  auto it = canonical_.find(alternative);
  if (it == canonical_.end()) throw Error("unknown alternative: " + alternative);
  return it->second;
}

std::vector<ContextItem> find_all(const PatternSet& patterns, std::string_view normalized_text,
                                  const std::string& tweet_id) {
  std::u32string cps = text::decode_utf8(normalized_text);
  const std::size_t n = cps.size();

  std::vector<ContextItem> items;
  std::size_t i = 0;
  while (i < n) {
    auto bucket = patterns.by_first_char_.find(cps[i]);
    if (bucket == patterns.by_first_char_.end()) {
      ++i;
      continue;
    }
    bool matched = false;
    for (std::size_t idx : bucket->second) {
      const std::u32string& alt = patterns.decoded_[idx];
      if (i + alt.size() > n) continue;
      if (std::u32string_view(cps).substr(i, alt.size()) != alt) continue;
      if (i > 0 && text::is_ascii_alnum(cps[i - 1])) continue;
      std::size_t end = i + alt.size();
      if (end < n && text::is_ascii_alnum(cps[end])) continue;

      ContextItem item;
      item.tweet_id = tweet_id;
      item.item_type = patterns.item_type();
      item.char_start = i;
      item.char_end = end;
      item.surface = patterns.alternatives_[idx];
      item.canonical = patterns.canonical_for(item.surface);
      item.platform_tag = patterns.platform_tag();
      items.push_back(std::move(item));

      i = end;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return items;
}

PlatformDeviceExtractor::PlatformDeviceExtractor(const Lexicon& lexicon,
                                                 const AltSpellingMap& alt_spellings) {
  auto names_for = [&](const std::map<PlatformTag, std::set<std::string>>& by_platform,
                       PlatformTag tag) -> std::set<std::string> {
    auto it = by_platform.find(tag);
    return it == by_platform.end() ? std::set<std::string>{} : it->second;
  };

  std::set<std::string> ios_platform = names_for(lexicon.platform_names, PlatformTag::ios);
  if (ios_platform.empty()) ios_platform = {"ios"};
  std::set<std::string> android_platform = names_for(lexicon.platform_names, PlatformTag::android);
  android_platform.insert("android");

  pattern_sets_.push_back(
      PatternSet::build(ItemType::platform, PlatformTag::ios, ios_platform, alt_spellings));
  pattern_sets_.push_back(PatternSet::build(ItemType::platform, PlatformTag::android,
                                            android_platform, alt_spellings));
  if (auto devices = names_for(lexicon.device_names, PlatformTag::ios); !devices.empty()) {
    pattern_sets_.push_back(
        PatternSet::build(ItemType::device, PlatformTag::ios, devices, alt_spellings));
  }
  if (auto devices = names_for(lexicon.device_names, PlatformTag::android); !devices.empty()) {
    pattern_sets_.push_back(
        PatternSet::build(ItemType::device, PlatformTag::android, devices, alt_spellings));
  }
}

std::vector<ContextItem> PlatformDeviceExtractor::extract(const Tweet& tweet) const {
  std::vector<ContextItem> all;
  for (const PatternSet& set : pattern_sets_) {
    for (ContextItem& item : find_all(set, tweet.norm_text, tweet.id)) {
      all.push_back(std::move(item));
    }
  }

  // a span strictly inside a longer one loses (e.g. the platform inside a
  // device name like "android one")
  std::vector<ContextItem> kept;
  for (const ContextItem& item : all) {
    bool nested = false;
    for (const ContextItem& other : all) {
      if (other.char_start <= item.char_start && item.char_end <= other.char_end &&
          other.char_end - other.char_start > item.char_end - item.char_start) {
        nested = true;
        break;
      }
    }
    if (!nested) kept.push_back(item);
  }

  std::sort(kept.begin(), kept.end(), [](const ContextItem& a, const ContextItem& b) {
    if (a.char_start != b.char_start) return a.char_start < b.char_start;
    if (a.char_end != b.char_end) return a.char_end < b.char_end;
    return a.item_type < b.item_type;
  });
  return kept;
}

std::vector<ContextItem> extract_platform_device(const Lexicon& lexicon,
                                                 const AltSpellingMap& alt_spellings,
                                                 const Tweet& tweet) {
  return PlatformDeviceExtractor(lexicon, alt_spellings).extract(tweet);
}

}  // namespace ctxmine
