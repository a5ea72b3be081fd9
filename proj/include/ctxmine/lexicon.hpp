#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ctxmine/types.hpp"

namespace ctxmine {

/// One row of the supported-devices table (Google Play export shape).
struct DeviceTableRow {
  std::string retail_branding;
  std::string marketing_name;
  std::string device;
  std::string model;
};

/// Token-level view of the tweet corpus used by the device-list filter:
/// answers whether a word occurs at all, and whether a multiword name occurs
/// as a contiguous token sequence.
class CorpusVocabulary {
 public:
  explicit CorpusVocabulary(const std::vector<std::vector<std::string>>& sentences);

  bool contains_word(const std::string& word) const;
  bool contains_phrase(const std::vector<std::string>& words) const;
  const std::unordered_set<std::string>& words() const { return unigrams_; }

 private:
  static constexpr std::size_t kMaxPhraseWords = 6;
  std::unordered_set<std::string> unigrams_;
  std::unordered_set<std::string> phrases_;  // space-joined n-grams, 2..kMaxPhraseWords
};

struct DeviceFilterOptions {
  std::size_t min_length = 5;
  bool length_counts_spaces = true;
};

struct DeviceFilterStage {
  std::string name;
  std::set<std::string> kept;
};

struct DeviceFilterReport {
  std::vector<DeviceFilterStage> stages;  // the five stages, in order
  const std::set<std::string>& result() const { return stages.back().kept; }
};

/// The five-stage device-list filter: (1) unique marketing names,
/// (2) drop names shorter than min_length, (3) drop names not occurring in
/// the tweet corpus, (4) drop single-word names that are common English
/// words, (5) drop manually excluded names.
DeviceFilterReport filter_android_devices(const std::vector<DeviceTableRow>& raw,
                                          const CorpusVocabulary& corpus,
                                          const std::set<std::string>& common_vocab,
                                          const std::set<std::string>& exclusions,
                                          const DeviceFilterOptions& options = {});

/// Device names extended by the five product lines users commonly reference
/// on their own (iphone, ipad, ipod touch, apple tv, apple watch).
std::set<std::string> build_ios_devices(const std::vector<std::string>& raw);

std::set<VersionString> load_version_list(const std::string& path);

struct Lexicon {
  std::map<PlatformTag, std::set<std::string>> platform_names;
  std::map<PlatformTag, std::set<std::string>> device_names;
  std::map<VersionLabel, std::set<VersionString>> version_lists;
  std::set<std::string> exclusions;
};

/// Directional list overlap: |A ∩ B| / |A| as a percentage, for every
/// ordered pair of loaded version lists.
std::map<std::pair<VersionLabel, VersionLabel>, double> intersection_report(const Lexicon& lex);

/// CSV with a header row and columns retail_branding, marketing_name,
/// device, model.
std::vector<DeviceTableRow> load_device_table(const std::string& path);

/// One entry per line; blank lines skipped; entries lowercased and
/// whitespace-normalized.
std::vector<std::string> load_lines(const std::string& path);

/// Derives the list identity from a file name shaped
/// <app|system>_<platform>[_<app_name>].txt.
VersionLabel version_label_from_filename(const std::string& filename);

}  // namespace ctxmine
