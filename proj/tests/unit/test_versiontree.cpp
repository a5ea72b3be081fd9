#include <random>

#include "doctest.h"

#include "ctxmine/versiontree.hpp"
#include "support/oracles.hpp"

using namespace ctxmine;

namespace {

const VersionLabel kIosSystem = VersionLabel::system(PlatformTag::ios);
const VersionLabel kAndroidSystem = VersionLabel::system(PlatformTag::android);
const VersionLabel kSnapIos = VersionLabel::app(PlatformTag::ios, "snapchat");
const VersionLabel kSnapAndroid = VersionLabel::app(PlatformTag::android, "snapchat");

VersionString v(std::vector<int> components) { return VersionString{std::move(components)}; }

}  // namespace

TEST_CASE("build labels every prefix node") {
  std::map<VersionLabel, std::set<VersionString>> lists;
  lists[kSnapIos] = {v({8, 0, 1})};
  VersionTree tree = VersionTree::build(lists);
  CHECK(tree.node_count() == 3);  // [8], [8,0], [8,0,1]

  // prefixes answer queries with the inserted label
  auto m = tree.match(v({8, 0}), "");
  REQUIRE(m);
  CHECK(m->candidate_labels == std::set<VersionLabel>{kSnapIos});
  CHECK(!m->ancestor_fallback);
}

TEST_CASE("inserting an existing prefix adds labels, not nodes") {
  std::map<VersionLabel, std::set<VersionString>> lists;
  lists[kSnapIos] = {v({8, 0, 1})};
  lists[kAndroidSystem] = {v({8, 0})};
  VersionTree tree = VersionTree::build(lists);
  CHECK(tree.node_count() == 3);

  auto m = tree.match(v({8, 0}), "");
  REQUIRE(m);
  CHECK(m->candidate_labels == std::set<VersionLabel>{kSnapIos, kAndroidSystem});
}

TEST_CASE("empty lists never match") {
  VersionTree tree = VersionTree::build({});
  CHECK(tree.node_count() == 0);
  CHECK(!tree.match(v({1}), ""));
}

TEST_CASE("ancestor fallback selects the deepest listed version and prunes systems") {
  // the "version 8.0.1.785" walk-through
  std::map<VersionLabel, std::set<VersionString>> lists;
  lists[kSnapIos] = {v({8, 0, 1})};
  lists[kSnapAndroid] = {v({8, 0, 1})};
  lists[kIosSystem] = {v({8, 0, 1})};
  VersionTree tree = VersionTree::build(lists);

  auto m = tree.match(v({8, 0, 1, 785}), "version");
  REQUIRE(m);
  CHECK(m->matched_version == v({8, 0, 1}));
  CHECK(m->input_depth == 4);
  CHECK(m->ancestor_fallback);
  CHECK(m->candidate_labels == std::set<VersionLabel>{kSnapIos, kSnapAndroid});
}

TEST_CASE("fallback that only reaches system versions yields nothing") {
  std::map<VersionLabel, std::set<VersionString>> lists;
  lists[kAndroidSystem] = {v({9})};
  VersionTree tree = VersionTree::build(lists);
  CHECK(!tree.match(v({9, 1}), "android"));
}

TEST_CASE("previous token selects among multiple system labels") {
  std::map<VersionLabel, std::set<VersionString>> lists;
  lists[kIosSystem] = {v({7}), v({7, 1})};
  lists[kAndroidSystem] = {v({7}), v({7, 0})};
  lists[kSnapAndroid] = {v({7})};
  VersionTree tree = VersionTree::build(lists);

  auto m = tree.match(v({7}), "android");
  REQUIRE(m);
  CHECK(m->candidate_labels == std::set<VersionLabel>{kAndroidSystem, kSnapAndroid});

  // app labels survive the rule; only the other system label goes
  auto m2 = tree.match(v({7}), "ios");
  REQUIRE(m2);
  CHECK(m2->candidate_labels == std::set<VersionLabel>{kIosSystem, kSnapAndroid});

  // a neutral previous token keeps the ambiguity
  auto m3 = tree.match(v({7}), "since");
  REQUIRE(m3);
  CHECK(m3->candidate_labels ==
        std::set<VersionLabel>{kIosSystem, kAndroidSystem, kSnapAndroid});
}

TEST_CASE("previous token rule needs at least two system candidates") {
  std::map<VersionLabel, std::set<VersionString>> lists;
  lists[kIosSystem] = {v({12})};
  VersionTree tree = VersionTree::build(lists);
  auto m = tree.match(v({12}), "android");
  REQUIRE(m);
  CHECK(m->candidate_labels == std::set<VersionLabel>{kIosSystem});
}

TEST_CASE("unknown version yields no match") {
  std::map<VersionLabel, std::set<VersionString>> lists;
  lists[kIosSystem] = {v({12, 1})};
  VersionTree tree = VersionTree::build(lists);
  CHECK(!tree.match(v({99}), ""));
}

TEST_CASE("prefix closure: listed versions always match before pruning") {
  std::map<VersionLabel, std::set<VersionString>> lists;
  lists[kSnapIos] = {v({1, 2}), v({3})};
  lists[kAndroidSystem] = {v({1, 2, 3})};
  VersionTree tree = VersionTree::build(lists);
  for (const auto& [label, versions] : lists) {
    for (const VersionString& version : versions) {
      auto m = tree.match(version, "");
      REQUIRE(m);
      CHECK(m->candidate_labels.count(label));
      CHECK(!m->ancestor_fallback);
    }
  }
}

TEST_CASE("tree build is order independent") {
  std::map<VersionLabel, std::set<VersionString>> lists;
  lists[kSnapIos] = {v({8, 0, 1}), v({10, 2})};
  lists[kIosSystem] = {v({8, 0}), v({12, 1, 4})};
  lists[kAndroidSystem] = {v({8, 0, 0}), v({9})};

  // std::map fixes insertion order, so build twice with the same content but
  // reversed label identities mapped onto the same sets
  VersionTree a = VersionTree::build(lists);
  std::map<VersionLabel, std::set<VersionString>> reversed(lists.rbegin(), lists.rend());
  VersionTree b = VersionTree::build(reversed);

  CHECK(a.node_count() == b.node_count());
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    VersionString input;
    int depth = 1 + static_cast<int>(rng() % 4);
    for (int d = 0; d < depth; ++d) input.components.push_back(static_cast<int>(rng() % 13));
    auto ma = a.match(input, "ios");
    auto mb = b.match(input, "ios");
    CHECK(ma.has_value() == mb.has_value());
    if (ma && mb) {
      CHECK(ma->matched_version == mb->matched_version);
      CHECK(ma->candidate_labels == mb->candidate_labels);
    }
  }
}

TEST_CASE("match agrees with the linear-scan oracle on random instances") {
  std::mt19937 rng(17);
  const std::vector<VersionLabel> labels = {
      kIosSystem, kAndroidSystem, kSnapIos, kSnapAndroid,
      VersionLabel::app(PlatformTag::ios, "spotify"),
      VersionLabel::app(PlatformTag::android, "spotify")};
  const std::vector<std::string> prev_tokens = {"ios", "android", "version", "(", "", "on"};

  for (int trial = 0; trial < 2000; ++trial) {
    std::map<VersionLabel, std::set<VersionString>> lists;
    for (const VersionLabel& label : labels) {
      if (rng() % 3 == 0) continue;
      std::set<VersionString> versions;
      int count = 1 + static_cast<int>(rng() % 5);
      for (int c = 0; c < count; ++c) {
        VersionString version;
        int depth = 1 + static_cast<int>(rng() % 4);
        for (int d = 0; d < depth; ++d) version.components.push_back(static_cast<int>(rng() % 6));
        versions.insert(version);
      }
      lists[label] = versions;
    }
    VersionTree tree = VersionTree::build(lists);

    VersionString input;
    int depth = 1 + static_cast<int>(rng() % 5);
    for (int d = 0; d < depth; ++d) input.components.push_back(static_cast<int>(rng() % 6));
    const std::string& prev = prev_tokens[rng() % prev_tokens.size()];

    auto expected = oracle::version_match(lists, input, prev);
    auto actual = tree.match(input, prev);
    REQUIRE(expected.has_value() == actual.has_value());
    if (expected) {
      CHECK(expected->matched_version == actual->matched_version);
      CHECK(expected->candidate_labels == actual->candidate_labels);
      CHECK(expected->ancestor_fallback == actual->ancestor_fallback);
    }
  }
}

TEST_CASE("normalize_version_token strips prefixes and suffixes") {
  const std::set<std::string> platforms = {"ios", "android"};

  auto t1 = normalize_version_token("v8.4.17", platforms);
  REQUIRE(t1);
  CHECK(!t1->platform_prefix);
  CHECK(t1->version == v({8, 4, 17}));
  CHECK(t1->core_start == 1);
  CHECK(t1->core_end == 7);

  auto t2 = normalize_version_token("ios12", platforms);
  REQUIRE(t2);
  REQUIRE(t2->platform_prefix);
  CHECK(*t2->platform_prefix == "ios");
  CHECK(t2->version == v({12}));
  CHECK(t2->prefix_start == 0);
  CHECK(t2->prefix_end == 3);

  auto t3 = normalize_version_token("8.1.13arm7", platforms);
  REQUIRE(t3);
  CHECK(t3->version == v({8, 1, 13}));
  CHECK(t3->core_end == 6);

  CHECK(!normalize_version_token("hello", platforms));
  CHECK(!normalize_version_token("", platforms));
  // years and ids: bare integers longer than four digits are rejected
  CHECK(!normalize_version_token("50012345", platforms));
  CHECK(normalize_version_token("2019", platforms));
  // architecture-style token: all leading characters stripped
  auto t4 = normalize_version_token("armv7", platforms);
  REQUIRE(t4);
  CHECK(!t4->platform_prefix);
  CHECK(t4->version == v({7}));

  auto t5 = normalize_version_token("android9", platforms);
  REQUIRE(t5);
  CHECK(*t5->platform_prefix == "android");
}
