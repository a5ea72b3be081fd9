#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "ctxmine/error.hpp"
#include "ctxmine/lexicon.hpp"

using namespace ctxmine;
namespace fs = std::filesystem;

namespace {

std::vector<DeviceTableRow> sample_rows() {
  return {
      {"Samsung", "Galaxy S8", "dreamlte", "SM-G950F"},
      {"Samsung", "Galaxy S8", "dreamlteks", "SM-G950N"},  // duplicate marketing name
      {"Samsung", "Galaxy S9", "starlte", "SM-G960F"},
      {"LG", "V", "vee", "LG-V"},
      {"LG", "Q7", "q7", "LMQ610"},
      {"vivo", "1610", "1610", "vivo 1610"},
      {"Amazon", "Prime", "prime", "AP-1"},
      {"Acme", "Horizon", "hzn", "ACME-H1"},
      {"Fantasy", "Fantasy Tablet X", "ftx", "FTX-1"},
  };
}

CorpusVocabulary sample_corpus() {
  return CorpusVocabulary({
      {"my", "galaxy", "s8", "keeps", "crashing"},
      {"galaxy", "s9", "here"},
      {"prime", "example", "of", "a", "bug"},
      {"the", "horizon", "view", "looks", "odd"},
  });
}

fs::path temp_list(const std::string& content) {
  static std::mt19937_64 rng(std::random_device{}());
  fs::path p = fs::temp_directory_path() / ("ctxmine_list_" + std::to_string(rng()) + ".txt");
  std::ofstream out(p);
  out << content;
  return p;
}

}  // namespace

TEST_CASE("filter_android_devices runs the five stages") {
  auto report = filter_android_devices(sample_rows(), sample_corpus(), {"prime", "go", "five"},
                                       {"horizon"});

  REQUIRE(report.stages.size() == 5);
  // 9 rows, 8 unique names
  CHECK(report.stages[0].kept.size() == 8);
  // "v", "q7", "1610" are shorter than 5 characters
  CHECK(report.stages[1].kept.size() == 5);
  CHECK(!report.stages[1].kept.count("v"));
  CHECK(!report.stages[1].kept.count("q7"));
  // "fantasy tablet x" never occurs in the corpus
  CHECK(report.stages[2].kept.size() == 4);
  CHECK(!report.stages[2].kept.count("fantasy tablet x"));
  // "prime" is a common word; multiword names are never dropped here
  CHECK(report.stages[3].kept.size() == 3);
  CHECK(!report.stages[3].kept.count("prime"));
  CHECK(report.stages[3].kept.count("galaxy s8"));
  // "horizon" is excluded manually
  CHECK(report.result() == std::set<std::string>{"galaxy s8", "galaxy s9"});
}

TEST_CASE("filter stages are monotone subsets") {
  auto report = filter_android_devices(sample_rows(), sample_corpus(), {"prime"}, {"horizon"});
  for (size_t i = 1; i < report.stages.size(); ++i) {
    CHECK(report.stages[i].kept.size() <= report.stages[i - 1].kept.size());
    for (const std::string& name : report.stages[i].kept) {
      CHECK(report.stages[i - 1].kept.count(name));
    }
  }
  // deterministic across runs
  auto again = filter_android_devices(sample_rows(), sample_corpus(), {"prime"}, {"horizon"});
  for (size_t i = 0; i < report.stages.size(); ++i) {
    CHECK(report.stages[i].kept == again.stages[i].kept);
  }
}

TEST_CASE("filter length rule is configurable about spaces") {
  std::vector<DeviceTableRow> rows = {{"X", "ab cd", "d", "m"}};  // 5 chars with the space
  CorpusVocabulary corpus(std::vector<std::vector<std::string>>{{"ab", "cd"}});

  DeviceFilterOptions with_spaces;
  auto kept = filter_android_devices(rows, corpus, {}, {}, with_spaces);
  CHECK(kept.stages[1].kept.count("ab cd"));

  DeviceFilterOptions without_spaces;
  without_spaces.length_counts_spaces = false;
  auto dropped = filter_android_devices(rows, corpus, {}, {}, without_spaces);
  CHECK(!dropped.stages[1].kept.count("ab cd"));
}

TEST_CASE("filter rejects an empty table") {
  CHECK_THROWS_AS(filter_android_devices({}, sample_corpus(), {}, {}), Error);
}

TEST_CASE("build_ios_devices extends by the product lines") {
  std::vector<std::string> raw;
  for (int i = 0; i < 51; ++i) raw.push_back("device model " + std::to_string(i));
  CHECK(build_ios_devices(raw).size() == 56);

  CHECK(build_ios_devices({"iPhone"}).size() == 5);  // set semantics, no duplicate
  CHECK(build_ios_devices({}) ==
        std::set<std::string>{"iphone", "ipad", "ipod touch", "apple tv", "apple watch"});
}

TEST_CASE("load_version_list parses and rejects") {
  fs::path good = temp_list("12.1.4\n8.0.1\n8.0.1\n\n9\n");
  auto versions = load_version_list(good.string());
  fs::remove(good);
  CHECK(versions.size() == 3);  // duplicate collapsed
  CHECK(versions.count(VersionString{{12, 1, 4}}));
  CHECK(versions.count(VersionString{{8, 0, 1}}));
  CHECK(versions.count(VersionString{{9}}));

  fs::path bad = temp_list("1.1a\n");
  CHECK_THROWS_WITH_AS(load_version_list(bad.string()), doctest::Contains("line 1"), Error);
  fs::remove(bad);

  fs::path leading = temp_list("A1.0\n");
  CHECK_THROWS_AS(load_version_list(leading.string()), Error);
  fs::remove(leading);
}

TEST_CASE("intersection_report is directional") {
  Lexicon lex;
  VersionLabel a = VersionLabel::app(PlatformTag::ios, "netflix");
  VersionLabel b = VersionLabel::app(PlatformTag::android, "netflix");

  // 224 versions on one side, 8 shared
  std::set<VersionString> list_a, list_b;
  for (int i = 0; i < 224; ++i) list_a.insert(VersionString{{1, i}});
  for (int i = 0; i < 8; ++i) list_b.insert(VersionString{{1, i}});
  for (int i = 0; i < 40; ++i) list_b.insert(VersionString{{2, i}});
  lex.version_lists[a] = list_a;
  lex.version_lists[b] = list_b;

  auto report = intersection_report(lex);
  CHECK(report[{a, b}] == doctest::Approx(3.57).epsilon(0.01));
  CHECK(report[{b, a}] == doctest::Approx(100.0 * 8 / 48).epsilon(0.001));

  Lexicon same;
  same.version_lists[a] = list_a;
  same.version_lists[b] = list_a;
  auto identical = intersection_report(same);
  CHECK(identical[{a, b}] == doctest::Approx(100.0));

  Lexicon disjoint;
  disjoint.version_lists[a] = {VersionString{{1}}};
  disjoint.version_lists[b] = {VersionString{{2}}};
  CHECK(intersection_report(disjoint)[{a, b}] == doctest::Approx(0.0));
}

TEST_CASE("version_label_from_filename") {
  CHECK(version_label_from_filename("system_ios.txt") == VersionLabel::system(PlatformTag::ios));
  CHECK(version_label_from_filename("/x/y/app_android_spotify.txt") ==
        VersionLabel::app(PlatformTag::android, "spotify"));
  CHECK_THROWS_AS(version_label_from_filename("whatever.txt"), Error);
  CHECK_THROWS_AS(version_label_from_filename("app_ios.txt"), Error);
}
