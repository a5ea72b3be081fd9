#include "ctxmine/config.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "ctxmine/error.hpp"

namespace ctxmine {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string resolve(const fs::path& base, const std::string& value) {
  if (value.empty()) return value;
  fs::path p(value);
  if (p.is_absolute()) return p.string();
  return (base / p).lexically_normal().string();
}

}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error("config is not a JSON object: " + path);

  Config cfg;
  const fs::path base = fs::path(path).parent_path();

  cfg.account = j.value("account", cfg.account);
  for (const auto& h : j.value("support_handles", std::vector<std::string>{})) {
    cfg.support_handles.insert(h);
  }

  if (j.contains("paths")) {
    const json& p = j["paths"];
    auto get = [&](const char* key) { return resolve(base, p.value(key, std::string{})); };
    cfg.corpus = get("corpus");
    cfg.train_corpus = get("train_corpus");
    cfg.truthset = get("truthset");
    cfg.device_table = get("device_table");
    cfg.ios_devices = get("ios_devices");
    cfg.android_codenames = get("android_codenames");
    cfg.common_vocab = get("common_vocab");
    cfg.device_exclusions = get("device_exclusions");
    cfg.spelling_exclusions = get("spelling_exclusions");
    cfg.alt_spellings = get("alt_spellings");
    cfg.coder_a = get("coder_a");
    cfg.coder_b = get("coder_b");
    // outputs land relative to the working directory, not the config file
    if (p.contains("out_dir")) cfg.out_dir = p["out_dir"].get<std::string>();
    for (const auto& v : p.value("version_lists", std::vector<std::string>{})) {
      cfg.version_lists.push_back(resolve(base, v));
    }
  }

  if (j.contains("embedding")) {
    const json& e = j["embedding"];
    EmbeddingHyperparams& h = cfg.embedding;
    h.dim = e.value("dim", h.dim);
    h.window = e.value("window", h.window);
    h.min_count = e.value("min_count", h.min_count);
    h.epochs = e.value("epochs", h.epochs);
    h.ngram_min = e.value("ngram_min", h.ngram_min);
    h.ngram_max = e.value("ngram_max", h.ngram_max);
    h.bucket_count = e.value("bucket_count", h.bucket_count);
    h.learning_rate = e.value("learning_rate", h.learning_rate);
    h.negative_samples = e.value("negative_samples", h.negative_samples);
    h.seed = e.value("seed", h.seed);
    h.threads = e.value("threads", h.threads);
  }

  cfg.alt_spellings_k = j.value("alt_spellings_k", cfg.alt_spellings_k);
  cfg.alt_spellings_max_distance =
      j.value("alt_spellings_max_distance", cfg.alt_spellings_max_distance);
  cfg.previous_token_window = j.value("previous_token_window", cfg.previous_token_window);
  if (cfg.previous_token_window < 1 || cfg.previous_token_window > 2) {
    throw Error("previous_token_window must be 1 or 2");
  }
  if (j.contains("eval_match_mode")) {
    std::string mode = j["eval_match_mode"].get<std::string>();
    if (mode == "exact") {
      cfg.eval_match_mode = MatchMode::exact;
    } else if (mode == "overlap") {
      cfg.eval_match_mode = MatchMode::overlap;
    } else {
      throw Error("eval_match_mode must be 'exact' or 'overlap'");
    }
  }
  if (j.contains("device_filter")) {
    const json& d = j["device_filter"];
    cfg.device_filter.min_length = d.value("min_length", cfg.device_filter.min_length);
    cfg.device_filter.length_counts_spaces =
        d.value("length_counts_spaces", cfg.device_filter.length_counts_spaces);
  }
  return cfg;
}

const std::string& Config::require_file(const std::string& value, const std::string& field) const {
  if (value.empty()) throw Error("config is missing paths." + field);
  if (!fs::exists(value)) throw Error("paths." + field + " does not exist: " + value);
  return value;
}

}  // namespace ctxmine
