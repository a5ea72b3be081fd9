#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctxmine/corpus.hpp"
#include "ctxmine/extractor.hpp"

namespace ctxmine {

/// One row of the evaluation table. tp/fp/fn count items; tn counts tweets
/// of the account with neither a label nor a prediction of the type.
struct EvalCell {
  ItemType item_type = ItemType::platform;
  std::string account;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::optional<double> precision() const {
    if (tp + fp == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  std::optional<double> recall() const {
    if (tp + fn == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
};

enum class MatchMode { exact, overlap };

/// The tweet universe evaluated over: every tweet the pipeline looked at,
/// with the support account it belongs to.
struct TweetRef {
  std::string id;
  std::string account;
};

/// Greedy span matching of predictions against labels, per tweet and type.
/// exact requires identical offsets; overlap accepts any shared character.
/// Returns one cell per (type, account) plus a "combined" cell per type
/// computed from the summed counts.
std::vector<EvalCell> score(const std::vector<ContextItem>& predictions,
                            const std::vector<TruthLabel>& labels,
                            const std::vector<TweetRef>& tweets,
                            MatchMode mode = MatchMode::exact);

/// Cohen's kappa over two per-tweet boolean codings.
double cohens_kappa(const std::map<std::string, bool>& coder_a,
                    const std::map<std::string, bool>& coder_b);

struct DatasetStats {
  std::size_t tweets = 0;
  std::size_t users = 0;
  std::size_t conversations = 0;
  std::optional<double> tweets_per_hour;         // absent when the span is zero
  std::optional<double> conversations_per_hour;
  double support_fraction = 0.0;
};

DatasetStats dataset_stats(const std::vector<Conversation>& conversations);

/// Human-readable table; the platform precision carries a sampling-bias
/// footnote because the truthset selection keys on platform words.
std::string render_eval_table(const std::vector<EvalCell>& cells);
std::string eval_csv(const std::vector<EvalCell>& cells);

}  // namespace ctxmine
