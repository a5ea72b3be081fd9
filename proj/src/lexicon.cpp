#include "ctxmine/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ctxmine/error.hpp"
#include "ctxmine/text.hpp"

namespace ctxmine {

namespace {

std::string fold_spaces_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> words;
  std::istringstream ss(s);
  std::string w;
  while (ss >> w) words.push_back(w);
  return words;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

}  // namespace

CorpusVocabulary::CorpusVocabulary(const std::vector<std::vector<std::string>>& sentences) {
  for (const auto& sentence : sentences) {
    for (const std::string& tok : sentence) unigrams_.insert(tok);
    for (std::size_t n = 2; n <= kMaxPhraseWords; ++n) {
      if (sentence.size() < n) break;
      for (std::size_t i = 0; i + n <= sentence.size(); ++i) {
        std::string joined = sentence[i];
        for (std::size_t k = 1; k < n; ++k) {
          joined += ' ';
          joined += sentence[i + k];
        }
        phrases_.insert(std::move(joined));
      }
    }
  }
}

bool CorpusVocabulary::contains_word(const std::string& word) const {
  return unigrams_.count(word) > 0;
}

bool CorpusVocabulary::contains_phrase(const std::vector<std::string>& words) const {
  if (words.empty()) return false;
  if (words.size() == 1) return contains_word(words[0]);
  if (words.size() > kMaxPhraseWords) return false;
  return phrases_.count(join_words(words)) > 0;
}

DeviceFilterReport filter_android_devices(const std::vector<DeviceTableRow>& raw,
                                          const CorpusVocabulary& corpus,
                                          const std::set<std::string>& common_vocab,
                                          const std::set<std::string>& exclusions,
                                          const DeviceFilterOptions& options) {
  if (raw.empty()) throw Error("device table is empty");

  DeviceFilterReport report;

  // (1) unique marketing names
  std::set<std::string> names;
  for (const DeviceTableRow& row : raw) {
    std::string name = fold_spaces_lower(row.marketing_name);
    if (!name.empty()) names.insert(std::move(name));
  }
  report.stages.push_back({"unique_marketing_names", names});

  // (2) minimum length
  std::set<std::string> long_enough;
  for (const std::string& name : names) {
    std::size_t len = 0;
    for (char32_t c : text::decode_utf8(name)) {
      if (c == U' ' && !options.length_counts_spaces) continue;
      ++len;
    }
    if (len >= options.min_length) long_enough.insert(name);
  }
  report.stages.push_back({"min_length", long_enough});

  // (3) mentioned in the tweet corpus; multiword names must occur as a
  // contiguous token sequence
  std::set<std::string> in_corpus;
  for (const std::string& name : long_enough) {
    if (corpus.contains_phrase(split_words(name))) in_corpus.insert(name);
  }
  report.stages.push_back({"in_corpus", in_corpus});

  // (4) single-word names that are common English words
  std::set<std::string> uncommon;
  for (const std::string& name : in_corpus) {
    if (name.find(' ') == std::string::npos && common_vocab.count(name)) continue;
    uncommon.insert(name);
  }
  report.stages.push_back({"not_common_word", uncommon});

  // (5) manual exclusions
  std::set<std::string> kept;
  for (const std::string& name : uncommon) {
    if (!exclusions.count(name)) kept.insert(name);
  }
  report.stages.push_back({"exclusions", kept});

  return report;
}

std::set<std::string> build_ios_devices(const std::vector<std::string>& raw) {
  std::set<std::string> out;
  for (const std::string& name : raw) {
    std::string folded = fold_spaces_lower(name);
    if (!folded.empty()) out.insert(std::move(folded));
  }
  for (const char* line : {"iphone", "ipad", "ipod touch", "apple tv", "apple watch"}) {
    out.insert(line);
  }
  return out;
}

std::set<VersionString> load_version_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open version list: " + path);
  std::set<VersionString> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = fold_spaces_lower(line);
    if (trimmed.empty()) continue;
    auto v = VersionString::parse(trimmed);
    if (!v) {
      throw Error(path + ": line " + std::to_string(line_no) + ": invalid version '" + trimmed +
                  "' (versions are dot-separated non-negative integers)");
    }
    out.insert(std::move(*v));
  }
  return out;
}

std::map<std::pair<VersionLabel, VersionLabel>, double> intersection_report(const Lexicon& lex) {
  std::map<std::pair<VersionLabel, VersionLabel>, double> out;
  for (const auto& [key_a, list_a] : lex.version_lists) {
    for (const auto& [key_b, list_b] : lex.version_lists) {
      if (key_a == key_b) continue;
      std::size_t shared = 0;
      for (const VersionString& v : list_a) {
        if (list_b.count(v)) ++shared;
      }
      double ratio = list_a.empty()
                         ? 0.0
                         : 100.0 * static_cast<double>(shared) / static_cast<double>(list_a.size());
      out[{key_a, key_b}] = ratio;
    }
  }
  return out;
}

std::vector<DeviceTableRow> load_device_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open device table: " + path);

  auto split_csv = [](const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c != '\r') {
        field += c;
      }
    }
    fields.push_back(std::move(field));
    return fields;
  };

  std::vector<DeviceTableRow> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = split_csv(line);
    if (line_no == 1) continue;  // header
    if (fields.size() != 4) {
      throw Error(path + ": line " + std::to_string(line_no) + ": expected 4 columns, got " +
                  std::to_string(fields.size()));
    }
    rows.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  return rows;
}

std::vector<std::string> load_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open list file: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string folded = fold_spaces_lower(line);
    if (!folded.empty()) out.push_back(std::move(folded));
  }
  return out;
}

VersionLabel version_label_from_filename(const std::string& filename) {
  std::string base = filename;
  if (auto slash = base.find_last_of("/\\"); slash != std::string::npos) {
    base = base.substr(slash + 1);
  }
  if (base.size() > 4 && base.ends_with(".txt")) base = base.substr(0, base.size() - 4);

  auto fail = [&]() -> VersionLabel {
    throw Error("version list file name '" + filename +
                "' does not match <app|system>_<platform>[_<app_name>].txt");
  };

  size_t first = base.find('_');
  if (first == std::string::npos) fail();
  std::string kind_str = base.substr(0, first);
  std::string rest = base.substr(first + 1);

  std::string platform_str;
  std::optional<std::string> app_name;
  if (auto second = rest.find('_'); second != std::string::npos) {
    platform_str = rest.substr(0, second);
    app_name = rest.substr(second + 1);
  } else {
    platform_str = rest;
  }

  auto platform = platform_tag_from_string(platform_str);
  if (!platform || *platform == PlatformTag::unknown) fail();
  if (kind_str == "system") {
    if (app_name) fail();
    return VersionLabel::system(*platform);
  }
  if (kind_str == "app") {
    if (!app_name || app_name->empty()) fail();
    return VersionLabel::app(*platform, *app_name);
  }
  return fail();
}

}  // namespace ctxmine
