#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "ctxmine/types.hpp"

namespace ctxmine {

struct VersionMatch {
  VersionString matched_version;          // the selected tree node
  std::size_t input_depth = 0;            // components in the input token
  std::set<VersionLabel> candidate_labels;
  bool ancestor_fallback = false;         // input was deeper than the node
};

/// Trie over dot-separated version components. Inserting "8.0.1" labels the
/// nodes [8], [8,0] and [8,0,1]; nodes also remember for which labels they
/// are an exact listed version (as opposed to a mere prefix).
class VersionTree {
 public:
  static VersionTree build(const std::map<VersionLabel, std::set<VersionString>>& lists);

  /// Descends along the input components as deep as possible. A full descent
  /// matches the reached node with all its labels. A partial descent falls
  /// back to the deepest visited node that is a listed version for some
  /// label. Pruning: (a) on fallback, system labels are removed because
  /// system version lists are complete; (b) if several system labels remain
  /// and the previous token names a platform, only that platform's system
  /// label is kept. Returns nothing when no candidates survive.
  std::optional<VersionMatch> match(const VersionString& version,
                                    std::string_view previous_token) const;

  std::size_t node_count() const;  // excluding the root

 private:
  struct Node {
    std::map<int, std::unique_ptr<Node>> children;
    std::set<VersionLabel> marks;   // labels of any listed version at or below
    std::set<VersionLabel> listed;  // labels for which this exact prefix is listed
  };

  static std::size_t count_nodes(const Node& node);

  Node root_;
};

struct NormalizedVersionToken {
  std::optional<std::string> platform_prefix;  // "ios" / "android" when split off
  VersionString version;
  // codepoint offsets within the token value
  std::size_t prefix_start = 0, prefix_end = 0;
  std::size_t core_start = 0, core_end = 0;
};

/// Extracts a version from a raw token: strips leading non-digit characters
/// (keeping them as a platform prefix when they name one), takes the longest
/// digits(.digits)* run, and ignores trailing junk such as architecture
/// suffixes. Bare integers longer than four digits are rejected (years,
/// error codes, phone numbers). Tokens without digits yield nothing.
std::optional<NormalizedVersionToken> normalize_version_token(
    std::string_view token, const std::set<std::string>& platforms);

}  // namespace ctxmine
