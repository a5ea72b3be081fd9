#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctxmine/config.hpp"
#include "ctxmine/corpus.hpp"
#include "ctxmine/embeddings.hpp"
#include "ctxmine/error.hpp"
#include "ctxmine/eval.hpp"
#include "ctxmine/extractor.hpp"
#include "ctxmine/lexicon.hpp"
#include "ctxmine/resolver.hpp"
#include "ctxmine/versiontree.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

using namespace ctxmine;

std::set<std::string> to_set(const std::vector<std::string>& lines) {
  return {lines.begin(), lines.end()};
}

std::vector<std::vector<std::string>> tokenized_sentences(
    const std::vector<Conversation>& conversations) {
  std::vector<std::vector<std::string>> sentences;
  for (const Conversation& conv : conversations) {
    for (const Tweet& tweet : conv.tweets) {
      std::vector<std::string> tokens;
      for (const Token& t : tokenize(tweet.norm_text)) tokens.push_back(t.value);
      sentences.push_back(std::move(tokens));
    }
  }
  return sentences;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

std::string lexicon_artifact(const Config& cfg, const char* name) {
  return (fs::path(cfg.out_dir) / name).string();
}

// Devices, platform names and version lists assembled from the build-lexicon
// artifacts plus the configured inputs.
Lexicon load_pipeline_lexicon(const Config& cfg) {
  Lexicon lex;
  std::string android_devices = lexicon_artifact(cfg, "android_devices.txt");
  std::string ios_devices = lexicon_artifact(cfg, "ios_devices.txt");
  if (!fs::exists(android_devices) || !fs::exists(ios_devices)) {
    throw Error("lexicon artifacts not found in " + cfg.out_dir + " (run build-lexicon first)");
  }
  lex.device_names[PlatformTag::android] = to_set(load_lines(android_devices));
  lex.device_names[PlatformTag::ios] = to_set(load_lines(ios_devices));
  lex.platform_names[PlatformTag::ios] = {"ios"};
  std::set<std::string> android_names = {"android"};
  if (!cfg.android_codenames.empty()) {
    for (const std::string& name :
         load_lines(cfg.require_file(cfg.android_codenames, "android_codenames"))) {
      android_names.insert(name);
    }
  }
  lex.platform_names[PlatformTag::android] = std::move(android_names);
  for (const std::string& path : cfg.version_lists) {
    if (!fs::exists(path)) throw Error("version list does not exist: " + path);
    lex.version_lists[version_label_from_filename(path)] = load_version_list(path);
  }
  return lex;
}

AltSpellingMap load_alt_spellings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open alternative spellings file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error("alternative spellings file is not a JSON object: " + path);
  }
  AltSpellingMap map;
  for (const auto& [keyword, spellings] : j.items()) {
    for (const auto& s : spellings) map[keyword].insert(s.get<std::string>());
  }
  return map;
}

int cmd_build_lexicon(const Config& cfg) {
  auto rows = load_device_table(cfg.require_file(cfg.device_table, "device_table"));
  auto corpus = load_conversations(cfg.require_file(cfg.train_corpus, "train_corpus"),
                                   cfg.support_handles);
  CorpusVocabulary vocab(tokenized_sentences(corpus));
  auto common = to_set(load_lines(cfg.require_file(cfg.common_vocab, "common_vocab")));
  std::set<std::string> exclusions;
  if (!cfg.device_exclusions.empty()) {
    exclusions = to_set(load_lines(cfg.require_file(cfg.device_exclusions, "device_exclusions")));
  }

  DeviceFilterReport report =
      filter_android_devices(rows, vocab, common, exclusions, cfg.device_filter);
  auto ios = build_ios_devices(load_lines(cfg.require_file(cfg.ios_devices, "ios_devices")));

  fs::create_directories(cfg.out_dir);
  {
    std::ostringstream out;
    for (const std::string& name : report.result()) out << name << '\n';
    write_file(lexicon_artifact(cfg, "android_devices.txt"), out.str());
  }
  {
    std::ostringstream out;
    for (const std::string& name : ios) out << name << '\n';
    write_file(lexicon_artifact(cfg, "ios_devices.txt"), out.str());
  }

  ordered_json j;
  j["device_table_rows"] = rows.size();
  ordered_json stages = ordered_json::array();
  for (const DeviceFilterStage& stage : report.stages) {
    stages.push_back({{"stage", stage.name}, {"kept", stage.kept.size()}});
  }
  j["stages"] = std::move(stages);
  j["ios_devices"] = ios.size();
  if (!cfg.version_lists.empty()) {
    Lexicon lex;
    for (const std::string& path : cfg.version_lists) {
      if (!fs::exists(path)) throw Error("version list does not exist: " + path);
      lex.version_lists[version_label_from_filename(path)] = load_version_list(path);
    }
    ordered_json intersections = ordered_json::array();
    for (const auto& [pair, pct] : intersection_report(lex)) {
      intersections.push_back({{"from", pair.first.to_string()},
                               {"to", pair.second.to_string()},
                               {"shared_pct", pct}});
    }
    j["version_list_intersections"] = std::move(intersections);
  }
  write_file(lexicon_artifact(cfg, "lexicon_report.json"), j.dump(2) + "\n");

  for (const DeviceFilterStage& stage : report.stages) {
    std::cout << stage.name << ": " << stage.kept.size() << " devices\n";
  }
  std::cout << "ios devices: " << ios.size() << "\n";
  std::cout << "wrote " << lexicon_artifact(cfg, "android_devices.txt") << ", "
            << lexicon_artifact(cfg, "ios_devices.txt") << ", "
            << lexicon_artifact(cfg, "lexicon_report.json") << "\n";
  return 0;
}

int cmd_train(const Config& cfg) {
  auto corpus = load_conversations(cfg.require_file(cfg.train_corpus, "train_corpus"),
                                   cfg.support_handles);
  auto sentences = tokenized_sentences(corpus);
  if (sentences.empty()) throw Error("training corpus is empty");

  WordVectorModel model = WordVectorModel::train(sentences, cfg.embedding);
  fs::create_directories(cfg.out_dir);
  std::string model_path = lexicon_artifact(cfg, "model.bin");
  model.save(model_path);
  std::cout << "vocabulary size: " << model.vocab_size() << "\n";
  std::cout << "wrote " << model_path << "\n";

  // harvest alternative spellings for the platform code names and devices
  std::string android_devices = lexicon_artifact(cfg, "android_devices.txt");
  std::string ios_devices = lexicon_artifact(cfg, "ios_devices.txt");
  if (!fs::exists(android_devices) || !fs::exists(ios_devices)) {
    throw Error("lexicon artifacts not found in " + cfg.out_dir + " (run build-lexicon first)");
  }
  std::set<std::string> keywords = to_set(load_lines(android_devices));
  for (const std::string& d : load_lines(ios_devices)) keywords.insert(d);
  if (!cfg.android_codenames.empty()) {
    for (const std::string& name :
         load_lines(cfg.require_file(cfg.android_codenames, "android_codenames"))) {
      keywords.insert(name);
    }
  }
  std::set<std::string> exclusions;
  if (!cfg.spelling_exclusions.empty()) {
    exclusions =
        to_set(load_lines(cfg.require_file(cfg.spelling_exclusions, "spelling_exclusions")));
  }
  auto spellings = alternative_spellings(model, keywords, cfg.alt_spellings_k,
                                         cfg.alt_spellings_max_distance, exclusions);
  ordered_json j;
  for (const auto& [keyword, alts] : spellings) {
    if (alts.empty()) continue;
    ordered_json arr = ordered_json::array();
    for (const std::string& s : alts) arr.push_back(s);
    j[keyword] = std::move(arr);
  }
  std::string spellings_path = lexicon_artifact(cfg, "harvested_spellings.json");
  write_file(spellings_path, j.dump(2) + "\n");
  std::cout << "wrote " << spellings_path << "\n";
  return 0;
}

int cmd_extract(const Config& cfg) {
  Lexicon lex = load_pipeline_lexicon(cfg);
  AltSpellingMap spellings;
  if (!cfg.alt_spellings.empty()) {
    spellings = load_alt_spellings(cfg.require_file(cfg.alt_spellings, "alt_spellings"));
  }
  VersionTree tree = VersionTree::build(lex.version_lists);
  ConversationExtractor extractor(lex, spellings, tree,
                                  ResolverOptions{cfg.previous_token_window});

  auto conversations =
      load_conversations(cfg.require_file(cfg.corpus, "corpus"), cfg.support_handles);

  fs::create_directories(cfg.out_dir);
  std::ofstream items_out(lexicon_artifact(cfg, "items.jsonl"));
  std::ofstream missing_out(lexicon_artifact(cfg, "missing.jsonl"));
  if (!items_out || !missing_out) throw Error("cannot write outputs under " + cfg.out_dir);

  std::size_t item_count = 0, actionable = 0, conflicted = 0;
  for (const Conversation& conv : conversations) {
    ConversationContext ctx = extractor.extract(conv);
    for (const ContextItem& item : ctx.items) {
      items_out << context_item_to_json(item).dump() << '\n';
      ++item_count;
      if (item.conflicted) ++conflicted;
    }
    missing_out << missing_report(ctx).dump() << '\n';
    if (ctx.missing.empty()) ++actionable;
  }
  std::cout << "conversations: " << conversations.size() << "\n";
  std::cout << "items extracted: " << item_count << " (" << conflicted << " conflicted)\n";
  std::cout << "actionable conversations: " << actionable << "\n";
  std::cout << "wrote " << lexicon_artifact(cfg, "items.jsonl") << ", "
            << lexicon_artifact(cfg, "missing.jsonl") << "\n";
  return 0;
}

std::map<std::string, bool> load_coding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open coding file: " + path);
  std::map<std::string, bool> coding;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("tweet_id") || !j.contains("has_context")) {
      throw Error(path + ": line " + std::to_string(line_no) +
                  ": expected {\"tweet_id\", \"has_context\"}");
    }
    coding[j["tweet_id"].get<std::string>()] = j["has_context"].get<bool>();
  }
  return coding;
}

int cmd_evaluate(const Config& cfg) {
  auto conversations =
      load_conversations(cfg.require_file(cfg.corpus, "corpus"), cfg.support_handles);
  auto labels =
      load_truthset(cfg.require_file(cfg.truthset, "truthset"), conversations);

  std::string items_path = lexicon_artifact(cfg, "items.jsonl");
  if (!fs::exists(items_path)) {
    throw Error("no extraction output at " + items_path + " (run extract first)");
  }
  std::vector<ContextItem> predictions;
  {
    std::ifstream in(items_path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        throw Error(items_path + ": line " + std::to_string(line_no) + ": malformed JSON");
      }
      predictions.push_back(context_item_from_json(j));
    }
  }

  std::vector<TweetRef> universe;
  for (const Conversation& conv : conversations) {
    for (const Tweet& t : conv.tweets) {
      if (!t.is_support) universe.push_back({t.id, cfg.account});
    }
  }

  auto cells = score(predictions, labels, universe, cfg.eval_match_mode);
  std::string table = render_eval_table(cells);

  if (!cfg.coder_a.empty() && !cfg.coder_b.empty()) {
    double kappa = cohens_kappa(load_coding(cfg.require_file(cfg.coder_a, "coder_a")),
                                load_coding(cfg.require_file(cfg.coder_b, "coder_b")));
    std::ostringstream line;
    line << "inter-coder agreement (Cohen's kappa): " << kappa << "\n";
    table += line.str();
  }

  fs::create_directories(cfg.out_dir);
  write_file(lexicon_artifact(cfg, "eval_report.csv"), eval_csv(cells));
  write_file(lexicon_artifact(cfg, "eval_table.txt"), table);
  std::cout << table;
  std::cout << "wrote " << lexicon_artifact(cfg, "eval_report.csv") << ", "
            << lexicon_artifact(cfg, "eval_table.txt") << "\n";
  return 0;
}

int cmd_stats(const Config& cfg) {
  auto conversations =
      load_conversations(cfg.require_file(cfg.corpus, "corpus"), cfg.support_handles);
  DatasetStats stats = dataset_stats(conversations);
  ordered_json j;
  j["tweets"] = stats.tweets;
  j["users"] = stats.users;
  j["conversations"] = stats.conversations;
  if (stats.tweets_per_hour) {
    j["tweets_per_hour"] = *stats.tweets_per_hour;
  } else {
    j["tweets_per_hour"] = nullptr;
  }
  if (stats.conversations_per_hour) {
    j["conversations_per_hour"] = *stats.conversations_per_hour;
  } else {
    j["conversations_per_hour"] = nullptr;
  }
  j["support_fraction"] = stats.support_fraction;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctxmine: extracts platform, device and version mentions from support conversations"};
  app.require_subcommand(1);

  std::string config_path = "config.json";
  std::string out_dir_override, corpus_override;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> threads_override, window_override;
  std::optional<std::string> match_mode_override;

  app.add_option("-c,--config", config_path, "configuration file")->capture_default_str();
  app.add_option("--out-dir", out_dir_override, "override the output directory");
  app.add_option("--corpus", corpus_override, "override the corpus path");
  app.add_option("--seed", seed_override, "override the embedding seed");
  app.add_option("--threads", threads_override, "override the training thread count");
  app.add_option("--prev-window", window_override, "previous-token window (1 or 2)");
  app.add_option("--match-mode", match_mode_override, "evaluation span matching (exact|overlap)");

  auto* build = app.add_subcommand("build-lexicon", "filter the keyword lists");
  auto* train = app.add_subcommand("train", "train word vectors and harvest spellings");
  auto* extract = app.add_subcommand("extract", "extract context items per conversation");
  auto* evaluate = app.add_subcommand("evaluate", "score extraction output against the truthset");
  auto* stats = app.add_subcommand("stats", "report corpus statistics");

  CLI11_PARSE(app, argc, argv);

  try {
    ctxmine::Config cfg = ctxmine::Config::load(config_path);
    if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
    if (!corpus_override.empty()) cfg.corpus = corpus_override;
    if (seed_override) cfg.embedding.seed = *seed_override;
    if (threads_override) cfg.embedding.threads = *threads_override;
    if (window_override) {
      if (*window_override < 1 || *window_override > 2) {
        throw ctxmine::Error("--prev-window must be 1 or 2");
      }
      cfg.previous_token_window = *window_override;
    }
    if (match_mode_override) {
      if (*match_mode_override == "exact") {
        cfg.eval_match_mode = ctxmine::MatchMode::exact;
      } else if (*match_mode_override == "overlap") {
        cfg.eval_match_mode = ctxmine::MatchMode::overlap;
      } else {
        throw ctxmine::Error("--match-mode must be exact or overlap");
      }
    }

    if (build->parsed()) return cmd_build_lexicon(cfg);
    if (train->parsed()) return cmd_train(cfg);
    if (extract->parsed()) return cmd_extract(cfg);
    if (evaluate->parsed()) return cmd_evaluate(cfg);
    if (stats->parsed()) return cmd_stats(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
