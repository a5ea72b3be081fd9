#include <algorithm>

#include "doctest.h"

#include "ctxmine/corpus.hpp"
#include "ctxmine/resolver.hpp"

using namespace ctxmine;

namespace {

const VersionLabel kIosSystem = VersionLabel::system(PlatformTag::ios);
const VersionLabel kAndroidSystem = VersionLabel::system(PlatformTag::android);
const VersionLabel kSpotifyIos = VersionLabel::app(PlatformTag::ios, "spotify");
const VersionLabel kSpotifyAndroid = VersionLabel::app(PlatformTag::android, "spotify");

Lexicon fixture_lexicon() {
  Lexicon lex;
  lex.platform_names[PlatformTag::ios] = {"ios"};
  lex.platform_names[PlatformTag::android] = {"android", "lollipop"};
  lex.device_names[PlatformTag::ios] = {"iphone", "iphone xr", "ipad"};
  lex.device_names[PlatformTag::android] = {"htc one", "xperia xz3", "pixel 2", "galaxy s5",
                                            "galaxy s6"};
  lex.version_lists[kIosSystem] = {VersionString{{12, 1, 4}}, VersionString{{8, 1}},
                                   VersionString{{12, 0}}};
  lex.version_lists[kAndroidSystem] = {VersionString{{8, 0, 0}}, VersionString{{8, 1}},
                                       VersionString{{9}}};
  lex.version_lists[kSpotifyIos] = {VersionString{{8, 4, 61}}, VersionString{{8, 4, 74}}};
  lex.version_lists[kSpotifyAndroid] = {VersionString{{8, 4, 74}}};
  return lex;
}

Conversation make_conversation(const std::vector<std::pair<std::string, bool>>& texts) {
  Conversation conv;
  conv.id = "c1";
  int i = 0;
  for (const auto& [text, support] : texts) {
    Tweet t;
    t.id = "t" + std::to_string(++i);
    t.conversation_id = "c1";
    t.author_id = support ? "support" : "user";
    t.is_support = support;
    t.text = text;
    t.norm_text = normalize_text(text, {});
    t.created_at = i;
    conv.tweets.push_back(std::move(t));
  }
  return conv;
}

ConversationContext run(const Conversation& conv, ResolverOptions options = {}) {
  static Lexicon lex = fixture_lexicon();
  static VersionTree tree = VersionTree::build(lex.version_lists);
  return extract_conversation(conv, lex, {}, tree, options);
}

const ContextItem* find_item(const ConversationContext& ctx, ItemType type,
                             const std::string& surface) {
  for (const ContextItem& item : ctx.items) {
    if (item.item_type == type && item.surface == surface) return &item;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("a conflicted app version resolves through conversation evidence") {
  ConversationContext ctx = run(make_conversation({
      {"the error occurs on my htc one with android installed.", false},
      {"i'm on version 8.4.74", false},
  }));

  const ContextItem* version = find_item(ctx, ItemType::app_version, "8.4.74");
  REQUIRE(version);
  CHECK(!version->conflicted);
  CHECK(version->candidate_labels == std::set<VersionLabel>{kSpotifyAndroid});
  CHECK(version->platform_tag == PlatformTag::android);
  CHECK(ctx.platform_evidence == std::set<PlatformTag>{PlatformTag::android});
}

TEST_CASE("a full-context tweet leaves nothing missing") {
  ConversationContext ctx = run(make_conversation({
      {"i can't open playlists shared via whatsapp on my iphone xr, ios 12.1.4, spotify 8.4.61",
       false},
  }));
  CHECK(ctx.missing.empty());
  CHECK(find_item(ctx, ItemType::platform, "ios"));
  CHECK(find_item(ctx, ItemType::device, "iphone xr"));
  CHECK(find_item(ctx, ItemType::system_version, "12.1.4"));
  CHECK(find_item(ctx, ItemType::app_version, "8.4.61"));
}

TEST_CASE("missing items are reported per conversation") {
  ConversationContext ctx = run(make_conversation({
      {"the app widget has died and is now a rectangular black hole. xperia xz3 running android",
       false},
  }));
  CHECK(ctx.missing == std::set<ItemType>{ItemType::app_version, ItemType::system_version});

  auto report = missing_report(ctx);
  CHECK(report["conversation_id"] == "c1");
  CHECK(report["actionable"] == false);
  CHECK(report["missing"] == nlohmann::ordered_json::array({"app_version", "system_version"}));
  CHECK(report["items"].size() == 2);
}

TEST_CASE("an actionable conversation reports no missing items") {
  ConversationContext ctx = run(make_conversation({
      {"iphone xr, ios 12.1.4, spotify 8.4.61 here", false},
  }));
  auto report = missing_report(ctx);
  CHECK(report["actionable"] == true);
  CHECK(report["missing"].empty());
}

TEST_CASE("praise-only conversations miss all four items") {
  ConversationContext ctx = run(make_conversation({
      {"this is the greatest app i've ever used.", false},
  }));
  CHECK(ctx.items.empty());
  CHECK(ctx.missing.size() == 4);
}

TEST_CASE("support tweets are not processed") {
  ConversationContext ctx = run(make_conversation({
      {"the app keeps crashing", false},
      {"which iphone do you have? are you on ios 12.1.4?", true},
  }));
  CHECK(ctx.items.empty());
  CHECK(ctx.missing.size() == 4);

  ConversationContext none = run(make_conversation({
      {"are you on ios 12.1.4?", true},
  }));
  CHECK(none.items.empty());
  CHECK(none.missing.size() == 4);
}

TEST_CASE("device-internal numbers are not version mentions") {
  ConversationContext ctx = run(make_conversation({
      {"using a pixel 2 on android 9.", false},
  }));
  REQUIRE(find_item(ctx, ItemType::device, "pixel 2"));
  const ContextItem* system = find_item(ctx, ItemType::system_version, "9");
  REQUIRE(system);
  CHECK(system->candidate_labels == std::set<VersionLabel>{kAndroidSystem});
  // exactly one version item: the "2" inside "pixel 2" is skipped
  int version_items = 0;
  for (const ContextItem& item : ctx.items) {
    if (item.item_type == ItemType::system_version || item.item_type == ItemType::app_version) {
      ++version_items;
    }
  }
  CHECK(version_items == 1);
}

TEST_CASE("a platform glued to a version is split and kept") {
  ConversationContext ctx = run(make_conversation({{"ever since ios12 nothing works", false}}));
  const ContextItem* platform = find_item(ctx, ItemType::platform, "ios");
  REQUIRE(platform);
  CHECK(platform->platform_tag == PlatformTag::ios);
  const ContextItem* system = find_item(ctx, ItemType::system_version, "12");
  REQUIRE(system);
  CHECK(system->candidate_labels == std::set<VersionLabel>{kIosSystem});
  CHECK(ctx.platform_evidence == std::set<PlatformTag>{PlatformTag::ios});
}

TEST_CASE("previous-token window of two is opt-in") {
  Conversation conv = make_conversation({{"on android (8.1 pixel xl) it buffers", false}});

  // window 1: "(" precedes the version, both system labels stay, but the
  // conversation's android evidence resolves the conflict afterwards
  ConversationContext base = run(conv);
  const ContextItem* resolved = find_item(base, ItemType::system_version, "8.1");
  REQUIRE(resolved);
  CHECK(resolved->candidate_labels == std::set<VersionLabel>{kAndroidSystem});

  // with evidence stripped away the conflict is visible at window 1
  Conversation bare = make_conversation({{"running ( 8.1 build here", false}});
  ConversationContext w1 = run(bare);
  const ContextItem* conflicted = find_item(w1, ItemType::system_version, "8.1");
  REQUIRE(conflicted);
  CHECK(conflicted->conflicted);

  Conversation spaced = make_conversation({{"on android ( 8.1 build here", false}});
  ConversationContext w2 = run(spaced, ResolverOptions{2});
  const ContextItem* narrowed = find_item(w2, ItemType::system_version, "8.1");
  REQUIRE(narrowed);
  CHECK(narrowed->candidate_labels == std::set<VersionLabel>{kAndroidSystem});
}

TEST_CASE("resolve_conflicts prunes by unanimous evidence only") {
  ContextItem item;
  item.item_type = ItemType::app_version;
  item.candidate_labels = {kSpotifyIos, kSpotifyAndroid};
  item.conflicted = true;

  std::vector<ContextItem> both = {item};
  resolve_conflicts(both, {PlatformTag::ios, PlatformTag::android});
  CHECK(both[0].conflicted);
  CHECK(both[0].candidate_labels.size() == 2);

  std::vector<ContextItem> none = {item};
  resolve_conflicts(none, {});
  CHECK(none[0].conflicted);

  std::vector<ContextItem> android_ev = {item};
  resolve_conflicts(android_ev, {PlatformTag::android});
  CHECK(!android_ev[0].conflicted);
  CHECK(android_ev[0].candidate_labels == std::set<VersionLabel>{kSpotifyAndroid});
  CHECK(android_ev[0].item_type == ItemType::app_version);
}

TEST_CASE("resolution is idempotent and monotone") {
  ContextItem item;
  item.item_type = ItemType::app_version;
  item.candidate_labels = {kSpotifyIos, kSpotifyAndroid, kIosSystem};
  item.conflicted = true;

  std::vector<ContextItem> items = {item};
  resolve_conflicts(items, {PlatformTag::android});
  auto once = items;
  resolve_conflicts(items, {PlatformTag::android});
  CHECK(items[0].candidate_labels == once[0].candidate_labels);
  CHECK(items[0].conflicted == once[0].conflicted);
  CHECK(once[0].candidate_labels.size() <= item.candidate_labels.size());
}

TEST_CASE("contradictory evidence never empties a candidate set") {
  ContextItem item;
  item.item_type = ItemType::app_version;
  item.candidate_labels = {kSpotifyIos, kIosSystem};  // all-iOS conflict
  item.conflicted = true;
  std::vector<ContextItem> items = {item};
  resolve_conflicts(items, {PlatformTag::android});
  CHECK(items[0].candidate_labels == item.candidate_labels);
  CHECK(items[0].conflicted);
}

TEST_CASE("tweet order inside a conversation does not change the outcome") {
  Conversation conv = make_conversation({
      {"i'm on version 8.4.74", false},
      {"the error occurs on my htc one with android installed.", false},
  });
  ConversationContext ctx = run(conv);
  const ContextItem* version = find_item(ctx, ItemType::app_version, "8.4.74");
  REQUIRE(version);
  CHECK(!version->conflicted);
  CHECK(version->candidate_labels == std::set<VersionLabel>{kSpotifyAndroid});
}

TEST_CASE("mixed evidence leaves the paper's dual-device case alone") {
  ConversationContext ctx = run(make_conversation({
      {"it worked with my galaxy s5, but is not working with my new galaxy s6", false},
      {"i'm on 8.4.74", false},
  }));
  CHECK(find_item(ctx, ItemType::device, "galaxy s5"));
  CHECK(find_item(ctx, ItemType::device, "galaxy s6"));
  // both devices are android, so the version still resolves
  const ContextItem* version = find_item(ctx, ItemType::app_version, "8.4.74");
  REQUIRE(version);
  CHECK(!version->conflicted);
}

TEST_CASE("items round-trip through json") {
  ConversationContext ctx = run(make_conversation({
      {"iphone xr, ios 12.1.4, spotify 8.4.74 here", false},
  }));
  for (const ContextItem& item : ctx.items) {
    ContextItem back = context_item_from_json(context_item_to_json(item));
    CHECK(back.tweet_id == item.tweet_id);
    CHECK(back.item_type == item.item_type);
    CHECK(back.char_start == item.char_start);
    CHECK(back.char_end == item.char_end);
    CHECK(back.surface == item.surface);
    CHECK(back.canonical == item.canonical);
    CHECK(back.platform_tag == item.platform_tag);
    CHECK(back.candidate_labels == item.candidate_labels);
    CHECK(back.conflicted == item.conflicted);
  }
}
