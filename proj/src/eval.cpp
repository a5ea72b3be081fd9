#include "ctxmine/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ctxmine/error.hpp"

namespace ctxmine {

namespace {

constexpr ItemType kTypes[] = {ItemType::platform, ItemType::device, ItemType::app_version,
                               ItemType::system_version};

struct Span {
  std::size_t start, end;
};

bool overlaps(const Span& a, const Span& b) { return a.start < b.end && b.start < a.end; }

// leftmost-first, then longest
bool span_order(const Span& a, const Span& b) {
  if (a.start != b.start) return a.start < b.start;
  return a.end > b.end;
}

std::string format_ratio(const std::optional<double>& v) {
  if (!v) return "n/a";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << *v;
  return ss.str();
}

}  // namespace

std::vector<EvalCell> score(const std::vector<ContextItem>& predictions,
                            const std::vector<TruthLabel>& labels,
                            const std::vector<TweetRef>& tweets, MatchMode mode) {
  std::unordered_map<std::string, std::string> account_of;
  for (const TweetRef& ref : tweets) account_of[ref.id] = ref.account;

  for (const ContextItem& p : predictions) {
    if (!account_of.count(p.tweet_id)) {
      throw Error("prediction references tweet '" + p.tweet_id + "' outside the evaluated set");
    }
  }
  for (const TruthLabel& l : labels) {
    if (!account_of.count(l.tweet_id)) {
      throw Error("label references tweet '" + l.tweet_id + "' outside the evaluated set");
    }
  }

  // spans grouped by (tweet, type)
  using Key = std::pair<std::string, int>;
  std::map<Key, std::vector<Span>> pred_spans, label_spans;
  for (const ContextItem& p : predictions) {
    pred_spans[{p.tweet_id, static_cast<int>(p.item_type)}].push_back({p.char_start, p.char_end});
  }
  for (const TruthLabel& l : labels) {
    label_spans[{l.tweet_id, static_cast<int>(l.item_type)}].push_back({l.start, l.end});
  }

  std::map<std::pair<int, std::string>, EvalCell> cells;  // (type, account)
  std::set<std::string> accounts;
  for (const TweetRef& ref : tweets) accounts.insert(ref.account);
  for (ItemType type : kTypes) {
    for (const std::string& account : accounts) {
      EvalCell& cell = cells[{static_cast<int>(type), account}];
      cell.item_type = type;
      cell.account = account;
    }
  }

  std::unordered_set<std::string> seen_tweets;
  for (const TweetRef& ref : tweets) {
    if (!seen_tweets.insert(ref.id).second) continue;  // duplicate refs count once
    for (ItemType type : kTypes) {
      EvalCell& cell = cells[{static_cast<int>(type), ref.account}];
      Key key{ref.id, static_cast<int>(type)};

      auto pit = pred_spans.find(key);
      auto lit = label_spans.find(key);
      std::vector<Span> preds = pit == pred_spans.end() ? std::vector<Span>{} : pit->second;
      std::vector<Span> golds = lit == label_spans.end() ? std::vector<Span>{} : lit->second;

      if (preds.empty() && golds.empty()) {
        ++cell.tn;
        continue;
      }

      std::sort(preds.begin(), preds.end(), span_order);
      std::sort(golds.begin(), golds.end(), span_order);
      std::vector<bool> gold_used(golds.size(), false);
      for (const Span& p : preds) {
        bool matched = false;
        for (std::size_t g = 0; g < golds.size(); ++g) {
          if (gold_used[g]) continue;
          bool hit = mode == MatchMode::exact
                         ? (p.start == golds[g].start && p.end == golds[g].end)
                         : overlaps(p, golds[g]);
          if (hit) {
            gold_used[g] = true;
            matched = true;
            break;
          }
        }
        if (matched) {
          ++cell.tp;
        } else {
          ++cell.fp;
        }
      }
      for (std::size_t g = 0; g < golds.size(); ++g) {
        if (!gold_used[g]) ++cell.fn;
      }
    }
  }

  std::vector<EvalCell> out;
  for (ItemType type : kTypes) {
    EvalCell combined;
    combined.item_type = type;
    combined.account = "combined";
    for (const std::string& account : accounts) {
      const EvalCell& cell = cells[{static_cast<int>(type), account}];
      out.push_back(cell);
      combined.tp += cell.tp;
      combined.fp += cell.fp;
      combined.fn += cell.fn;
      combined.tn += cell.tn;
    }
    out.push_back(combined);
  }
  return out;
}

double cohens_kappa(const std::map<std::string, bool>& coder_a,
                    const std::map<std::string, bool>& coder_b) {
  if (coder_a.empty() || coder_b.empty()) throw Error("kappa needs a non-empty coding");
  if (coder_a.size() != coder_b.size()) {
    throw Error("kappa codings cover different tweet sets");
  }

  std::size_t both_yes = 0, a_only = 0, b_only = 0, both_no = 0;
  for (const auto& [id, a_val] : coder_a) {
    auto it = coder_b.find(id);
    if (it == coder_b.end()) throw Error("kappa codings cover different tweet sets");
    bool b_val = it->second;
    if (a_val && b_val) {
      ++both_yes;
    } else if (a_val) {
      ++a_only;
    } else if (b_val) {
      ++b_only;
    } else {
      ++both_no;
    }
  }

  const double n = static_cast<double>(coder_a.size());
  const double po = (both_yes + both_no) / n;
  const double a_yes = (both_yes + a_only) / n;
  const double b_yes = (both_yes + b_only) / n;
  const double pe = a_yes * b_yes + (1.0 - a_yes) * (1.0 - b_yes);
  if (pe >= 1.0) return 1.0;  // both codings constant and aligned
  return (po - pe) / (1.0 - pe);
}

DatasetStats dataset_stats(const std::vector<Conversation>& conversations) {
  DatasetStats stats;
  stats.conversations = conversations.size();

  std::set<std::string> users;
  std::int64_t min_ts = 0, max_ts = 0;
  std::size_t support = 0;
  bool first = true;
  for (const Conversation& conv : conversations) {
    for (const Tweet& t : conv.tweets) {
      ++stats.tweets;
      users.insert(t.author_id);
      if (t.is_support) ++support;
      if (first || t.created_at < min_ts) min_ts = t.created_at;
      if (first || t.created_at > max_ts) max_ts = t.created_at;
      first = false;
    }
  }
  stats.users = users.size();
  if (stats.tweets > 0) {
    stats.support_fraction = static_cast<double>(support) / static_cast<double>(stats.tweets);
    double hours = static_cast<double>(max_ts - min_ts) / 3600.0;
    if (hours > 0.0) {
      stats.tweets_per_hour = static_cast<double>(stats.tweets) / hours;
      stats.conversations_per_hour = static_cast<double>(stats.conversations) / hours;
    }
  }
  return stats;
}

std::string eval_csv(const std::vector<EvalCell>& cells) {
  std::ostringstream out;
  out << "type,account,tp,fp,fn,tn,precision,recall\n";
  for (const EvalCell& c : cells) {
    out << to_string(c.item_type) << ',' << c.account << ',' << c.tp << ',' << c.fp << ','
        << c.fn << ',' << c.tn << ',' << format_ratio(c.precision()) << ','
        << format_ratio(c.recall()) << '\n';
  }
  return out.str();
}

std::string render_eval_table(const std::vector<EvalCell>& cells) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "Type" << std::setw(12) << "Account" << std::right
      << std::setw(8) << "Items" << std::setw(7) << "TP" << std::setw(7) << "FP" << std::setw(7)
      << "FN" << std::setw(7) << "TN" << std::setw(11) << "Precision" << std::setw(9) << "Recall"
      << '\n';
  out << std::string(84, '-') << '\n';
  bool platform_seen = false;
  for (const EvalCell& c : cells) {
    std::string precision = format_ratio(c.precision());
    if (c.item_type == ItemType::platform && precision != "n/a") {
      precision += "*";
      platform_seen = true;
    }
    out << std::left << std::setw(16) << to_string(c.item_type) << std::setw(12) << c.account
        << std::right << std::setw(8) << c.tp + c.fn << std::setw(7) << c.tp << std::setw(7)
        << c.fp << std::setw(7) << c.fn << std::setw(7) << c.tn << std::setw(11) << precision
        << std::setw(9) << format_ratio(c.recall()) << '\n';
  }
  if (platform_seen) {
    out << "* platform precision is biased when the corpus was sampled for platform words\n";
  }
  return out.str();
}

}  // namespace ctxmine
