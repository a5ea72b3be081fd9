#include "doctest.h"

#include "ctxmine/error.hpp"
#include "ctxmine/extractor.hpp"

using namespace ctxmine;

namespace {

Tweet make_tweet(const std::string& id, const std::string& norm) {
  Tweet t;
  t.id = id;
  t.text = norm;
  t.norm_text = norm;
  return t;
}

Lexicon fixture_lexicon() {
  Lexicon lex;
  lex.platform_names[PlatformTag::ios] = {"ios"};
  lex.platform_names[PlatformTag::android] = {"android", "lollipop", "oreo", "pie"};
  lex.device_names[PlatformTag::ios] = {"iphone", "iphone 6", "iphone 6 plus", "ipad",
                                        "ipad mini"};
  lex.device_names[PlatformTag::android] = {"xperia xz3", "galaxy s8", "galaxy s8+", "htc one"};
  return lex;
}

std::vector<std::string> surfaces(const std::vector<ContextItem>& items) {
  std::vector<std::string> out;
  for (const ContextItem& item : items) out.push_back(item.surface);
  return out;
}

}  // namespace

TEST_CASE("build_pattern_set orders alternatives longest first") {
  PatternSet set = PatternSet::build(ItemType::device, PlatformTag::ios,
                                     {"iphone xr", "iphone 7"});
  CHECK(set.alternatives() == std::vector<std::string>{"iphone xr", "iphone 7"});

  PatternSet plus = PatternSet::build(ItemType::device, PlatformTag::android,
                                      {"galaxy s8", "galaxy s8+"});
  CHECK(plus.alternatives() == std::vector<std::string>{"galaxy s8+", "galaxy s8"});

  CHECK_THROWS_AS(PatternSet::build(ItemType::device, PlatformTag::ios, {}), Error);
}

TEST_CASE("alternative spellings map back to their keyword") {
  AltSpellingMap alts;
  alts["lollipop"] = {"lolipop", "lollypop"};
  PatternSet set = PatternSet::build(ItemType::platform, PlatformTag::android,
                                     {"android", "lollipop"}, alts);
  CHECK(set.canonical_for("lolipop") == "lollipop");
  CHECK(set.canonical_for("lollipop") == "lollipop");

  auto items = find_all(set, "running lolipop", "t");
  REQUIRE(items.size() == 1);
  CHECK(items[0].surface == "lolipop");
  CHECK(items[0].canonical == "lollipop");
  CHECK(items[0].item_type == ItemType::platform);
  CHECK(items[0].platform_tag == PlatformTag::android);
}

TEST_CASE("find_all returns all non-overlapping matches") {
  PatternSet set = PatternSet::build(ItemType::device, PlatformTag::ios,
                                     {"iphone", "iphone 6", "ipad", "ipad mini"});
  auto items = find_all(set, "the error occurs on my iphone 6 and ipad mini.", "t");
  CHECK(surfaces(items) == std::vector<std::string>{"iphone 6", "ipad mini"});
  for (const ContextItem& item : items) {
    CHECK(item.surface ==
          std::string("the error occurs on my iphone 6 and ipad mini.")
              .substr(item.char_start, item.char_end - item.char_start));
  }
}

TEST_CASE("find_all reproduces the galaxy s8 plus false positive") {
  PatternSet set = PatternSet::build(ItemType::device, PlatformTag::android,
                                     {"galaxy s8", "galaxy s8+"});
  auto items = find_all(set, "android version 8.0.0 galaxy s8 plus for t-mobile", "t");
  REQUIRE(items.size() == 1);
  CHECK(items[0].surface == "galaxy s8");
}

TEST_CASE("find_all respects word boundaries, with + part of the word") {
  PatternSet set = PatternSet::build(ItemType::device, PlatformTag::android,
                                     {"galaxy s8", "galaxy s8+", "s9+"});
  CHECK(find_all(set, "megagalaxy s8", "t").empty());
  CHECK(find_all(set, "galaxy s8x", "t").empty());

  auto plus = find_all(set, "my galaxy s8+ is fine", "t");
  REQUIRE(plus.size() == 1);
  CHECK(plus[0].surface == "galaxy s8+");

  auto end = find_all(set, "phone is a samsung s9+, so android", "t");
  REQUIRE(end.size() == 1);
  CHECK(end[0].surface == "s9+");
}

TEST_CASE("longest alternative wins at a position") {
  PatternSet set = PatternSet::build(ItemType::device, PlatformTag::ios,
                                     {"iphone", "iphone 6", "iphone 6 plus"});
  auto items = find_all(set, "broken on iphone 6 plus today", "t");
  REQUIRE(items.size() == 1);
  CHECK(items[0].surface == "iphone 6 plus");

  // adding an alternative spelling never removes a longer match
  AltSpellingMap alts;
  alts["iphone"] = {"iphon"};
  PatternSet with_alt = PatternSet::build(ItemType::device, PlatformTag::ios,
                                          {"iphone", "iphone 6", "iphone 6 plus"}, alts);
  auto again = find_all(with_alt, "broken on iphone 6 plus today", "t");
  REQUIRE(again.size() == 1);
  CHECK(again[0].surface == "iphone 6 plus");
}

TEST_CASE("matches never overlap and map into the text") {
  PatternSet set = PatternSet::build(ItemType::device, PlatformTag::android,
                                     {"galaxy", "galaxy s8", "s8"});
  std::string t = "galaxy s8 galaxy galaxy s8 s8";
  auto items = find_all(set, t, "t");
  for (size_t i = 1; i < items.size(); ++i) {
    CHECK(items[i - 1].char_end <= items[i].char_start);
  }
}

TEST_CASE("extract_platform_device unions the four pattern sets") {
  Lexicon lex = fixture_lexicon();
  Tweet tweet = make_tweet("t1", "xperia xz3 running android");
  auto items = extract_platform_device(lex, {}, tweet);
  REQUIRE(items.size() == 2);
  CHECK(items[0].surface == "xperia xz3");
  CHECK(items[0].item_type == ItemType::device);
  CHECK(items[0].platform_tag == PlatformTag::android);
  CHECK(items[1].surface == "android");
  CHECK(items[1].item_type == ItemType::platform);
  CHECK(items[0].tweet_id == "t1");
}

TEST_CASE("praise yields nothing") {
  Lexicon lex = fixture_lexicon();
  Tweet tweet = make_tweet("t1", "this is the greatest app i've ever used.");
  CHECK(extract_platform_device(lex, {}, tweet).empty());
}

TEST_CASE("short device names missing from the lists stay missed") {
  Lexicon lex = fixture_lexicon();
  Tweet tweet = make_tweet("t1", "worked fine on my iphone and laptop, just not on my s5.");
  auto items = extract_platform_device(lex, {}, tweet);
  REQUIRE(items.size() == 1);
  CHECK(items[0].surface == "iphone");
}

TEST_CASE("nested spans resolve to the longer one") {
  Lexicon lex;
  lex.platform_names[PlatformTag::android] = {"android"};
  lex.device_names[PlatformTag::android] = {"android one"};
  Tweet tweet = make_tweet("t1", "using an android one phone");
  auto items = extract_platform_device(lex, {}, tweet);
  REQUIRE(items.size() == 1);
  CHECK(items[0].surface == "android one");
  CHECK(items[0].item_type == ItemType::device);
}
