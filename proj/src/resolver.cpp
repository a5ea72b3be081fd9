#include "ctxmine/resolver.hpp"

#include <algorithm>

#include "ctxmine/error.hpp"
#include "ctxmine/text.hpp"

namespace ctxmine {

namespace {

const std::set<std::string> kPlatformWords = {"ios", "android"};

void refresh_version_item(ContextItem& item) {
  std::set<PlatformTag> platforms;
  std::set<VersionKind> kinds;
  for (const VersionLabel& l : item.candidate_labels) {
    platforms.insert(l.platform);
    kinds.insert(l.kind);
  }
  // a version is only a system version when every remaining candidate says
  // so; any app candidate keeps it an app version (system lists are
  // complete, app lists are not)
  item.item_type = (kinds.size() == 1 && *kinds.begin() == VersionKind::system)
                       ? ItemType::system_version
                       : ItemType::app_version;
  item.conflicted = platforms.size() > 1 || kinds.size() > 1;
  item.platform_tag = platforms.size() == 1 ? *platforms.begin() : PlatformTag::unknown;
}

bool spans_overlap(std::size_t a_start, std::size_t a_end, std::size_t b_start,
                   std::size_t b_end) {
  return a_start < b_end && b_start < a_end;
}

}  // namespace

ConversationExtractor::ConversationExtractor(const Lexicon& lexicon,
                                             const AltSpellingMap& alt_spellings,
                                             const VersionTree& tree, ResolverOptions options)
    : platform_device_(lexicon, alt_spellings), tree_(tree), options_(options) {}

ConversationContext ConversationExtractor::extract(const Conversation& conversation) const {
  ConversationContext ctx;
  ctx.conversation_id = conversation.id;

  for (const Tweet& tweet : conversation.tweets) {
    if (tweet.is_support) continue;

    std::vector<ContextItem> tweet_items = platform_device_.extract(tweet);
    const std::size_t pd_count = tweet_items.size();

    std::vector<Token> tokens = tokenize(tweet.norm_text);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const Token& token = tokens[t];

      // tokens inside an extracted platform/device span are not versions
      // (the "6" in "iphone 6", the "2" in "pixel 2")
      bool inside_extracted = false;
      for (std::size_t p = 0; p < pd_count; ++p) {
        if (spans_overlap(token.char_start, token.char_end, tweet_items[p].char_start,
                          tweet_items[p].char_end)) {
          inside_extracted = true;
          break;
        }
      }
      if (inside_extracted) continue;

      auto nv = normalize_version_token(token.value, kPlatformWords);
      if (!nv) continue;

      // a platform glued to the version ("ios12") is split off and kept
      if (nv->platform_prefix) {
        ContextItem platform_item;
        platform_item.tweet_id = tweet.id;
        platform_item.item_type = ItemType::platform;
        platform_item.char_start = token.char_start + nv->prefix_start;
        platform_item.char_end = token.char_start + nv->prefix_end;
        platform_item.surface = *nv->platform_prefix;
        platform_item.canonical = *nv->platform_prefix;
        platform_item.platform_tag =
            *nv->platform_prefix == "ios" ? PlatformTag::ios : PlatformTag::android;
        tweet_items.push_back(std::move(platform_item));
      }

      std::string previous;
      if (nv->platform_prefix) {
        previous = *nv->platform_prefix;
      } else if (t > 0) {
        previous = tokens[t - 1].value;
        for (int back = 1; back <= options_.previous_token_window; ++back) {
          if (back > static_cast<int>(t)) break;
          const std::string& candidate = tokens[t - static_cast<std::size_t>(back)].value;
          if (kPlatformWords.count(candidate)) {
            previous = candidate;
            break;
          }
        }
      }

      auto match = tree_.match(nv->version, previous);
      if (!match) continue;

      ContextItem item;
      item.tweet_id = tweet.id;
      item.char_start = token.char_start + nv->core_start;
      item.char_end = token.char_start + nv->core_end;
      item.surface = text::codepoint_slice(tweet.norm_text, item.char_start, item.char_end);
      item.canonical = match->matched_version.to_string();
      item.candidate_labels = match->candidate_labels;
      refresh_version_item(item);
      tweet_items.push_back(std::move(item));
    }

    std::sort(tweet_items.begin(), tweet_items.end(),
              [](const ContextItem& a, const ContextItem& b) {
                if (a.char_start != b.char_start) return a.char_start < b.char_start;
                return a.char_end < b.char_end;
              });
    for (ContextItem& item : tweet_items) ctx.items.push_back(std::move(item));
  }

  for (const ContextItem& item : ctx.items) {
    if (item.conflicted) continue;
    if (item.item_type == ItemType::platform || item.item_type == ItemType::device) {
      if (item.platform_tag != PlatformTag::unknown) ctx.platform_evidence.insert(item.platform_tag);
    }
  }

  resolve_conflicts(ctx.items, ctx.platform_evidence);

  std::set<ItemType> present;
  for (const ContextItem& item : ctx.items) present.insert(item.item_type);
  for (ItemType type : {ItemType::platform, ItemType::device, ItemType::app_version,
                        ItemType::system_version}) {
    if (!present.count(type)) ctx.missing.insert(type);
  }
  return ctx;
}

ConversationContext extract_conversation(const Conversation& conversation, const Lexicon& lexicon,
                                         const AltSpellingMap& alt_spellings,
                                         const VersionTree& tree, ResolverOptions options) {
  return ConversationExtractor(lexicon, alt_spellings, tree, options).extract(conversation);
}

void resolve_conflicts(std::vector<ContextItem>& items,
                       const std::set<PlatformTag>& platform_evidence) {
  const bool android_only = platform_evidence == std::set<PlatformTag>{PlatformTag::android};
  const bool ios_only = platform_evidence == std::set<PlatformTag>{PlatformTag::ios};
  if (!android_only && !ios_only) return;
  const PlatformTag remove = android_only ? PlatformTag::ios : PlatformTag::android;

  for (ContextItem& item : items) {
    if (!item.conflicted || item.candidate_labels.empty()) continue;
    std::set<VersionLabel> pruned = item.candidate_labels;
    std::erase_if(pruned, [&](const VersionLabel& l) { return l.platform == remove; });
    if (pruned.empty()) continue;  // contradictory evidence; leave the conflict visible
    item.candidate_labels = std::move(pruned);
    refresh_version_item(item);
  }
}

nlohmann::ordered_json context_item_to_json(const ContextItem& item) {
  nlohmann::ordered_json j;
  j["tweet_id"] = item.tweet_id;
  j["item_type"] = std::string(to_string(item.item_type));
  j["char_start"] = item.char_start;
  j["char_end"] = item.char_end;
  j["surface"] = item.surface;
  j["canonical"] = item.canonical;
  j["platform_tag"] = std::string(to_string(item.platform_tag));
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (const VersionLabel& l : item.candidate_labels) labels.push_back(l.to_string());
  j["candidate_labels"] = std::move(labels);
  j["conflicted"] = item.conflicted;
  return j;
}

ContextItem context_item_from_json(const nlohmann::json& j) {
  ContextItem item;
  item.tweet_id = j.at("tweet_id").get<std::string>();
  auto type = item_type_from_string(j.at("item_type").get<std::string>());
  if (!type) throw Error("unknown item_type in item record");
  item.item_type = *type;
  item.char_start = j.at("char_start").get<std::size_t>();
  item.char_end = j.at("char_end").get<std::size_t>();
  item.surface = j.at("surface").get<std::string>();
  item.canonical = j.at("canonical").get<std::string>();
  auto tag = platform_tag_from_string(j.at("platform_tag").get<std::string>());
  if (!tag) throw Error("unknown platform_tag in item record");
  item.platform_tag = *tag;
  for (const auto& label_str : j.at("candidate_labels")) {
    std::string s = label_str.get<std::string>();
    // "<platform>-<kind>[:<app>]"
    auto dash = s.find('-');
    if (dash == std::string::npos) throw Error("malformed candidate label: " + s);
    auto platform = platform_tag_from_string(s.substr(0, dash));
    if (!platform) throw Error("malformed candidate label: " + s);
    std::string rest = s.substr(dash + 1);
    auto colon = rest.find(':');
    if (colon == std::string::npos) {
      if (rest != "system") throw Error("malformed candidate label: " + s);
      item.candidate_labels.insert(VersionLabel::system(*platform));
    } else {
      if (rest.substr(0, colon) != "app") throw Error("malformed candidate label: " + s);
      item.candidate_labels.insert(VersionLabel::app(*platform, rest.substr(colon + 1)));
    }
  }
  item.conflicted = j.at("conflicted").get<bool>();
  return item;
}

nlohmann::ordered_json missing_report(const ConversationContext& ctx) {
  nlohmann::ordered_json j;
  j["conversation_id"] = ctx.conversation_id;
  j["actionable"] = ctx.missing.empty();
  nlohmann::ordered_json missing = nlohmann::ordered_json::array();
  for (ItemType type : {ItemType::platform, ItemType::device, ItemType::app_version,
                        ItemType::system_version}) {
    if (ctx.missing.count(type)) missing.push_back(std::string(to_string(type)));
  }
  j["missing"] = std::move(missing);
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const ContextItem& item : ctx.items) items.push_back(context_item_to_json(item));
  j["items"] = std::move(items);
  return j;
}

}  // namespace ctxmine
