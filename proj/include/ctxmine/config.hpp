#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctxmine/embeddings.hpp"
#include "ctxmine/eval.hpp"
#include "ctxmine/lexicon.hpp"
#include "ctxmine/resolver.hpp"

namespace ctxmine {

/// Declarative run configuration. Relative paths are resolved against the
/// directory containing the config file; command-line flags override fields.
struct Config {
  std::string account = "combined";
  std::set<std::string> support_handles;

  // inputs
  std::string corpus;
  std::string train_corpus;
  std::string truthset;
  std::string device_table;
  std::string ios_devices;
  std::string android_codenames;
  std::string common_vocab;
  std::string device_exclusions;
  std::string spelling_exclusions;
  std::vector<std::string> version_lists;
  std::string alt_spellings;
  std::string coder_a;
  std::string coder_b;

  // outputs
  std::string out_dir = "out";

  EmbeddingHyperparams embedding;
  std::size_t alt_spellings_k = 10;
  double alt_spellings_max_distance = 0.2;
  int previous_token_window = 1;
  MatchMode eval_match_mode = MatchMode::exact;
  DeviceFilterOptions device_filter;

  static Config load(const std::string& path);

  /// Returns the field value, or throws a descriptive Error naming the
  /// missing config field when it is empty or the file does not exist.
  const std::string& require_file(const std::string& value, const std::string& field) const;
};

}  // namespace ctxmine
