#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctxmine/corpus.hpp"
#include "ctxmine/extractor.hpp"
#include "ctxmine/versiontree.hpp"

namespace ctxmine {

/// Everything extracted from one conversation: the items, the platforms the
/// conversation gives evidence for, and which of the four item types are
/// still missing.
struct ConversationContext {
  std::string conversation_id;
  std::vector<ContextItem> items;
  std::set<PlatformTag> platform_evidence;
  std::set<ItemType> missing;
};

struct ResolverOptions {
  // how many preceding tokens may name the platform of a version mention
  int previous_token_window = 1;
};

/// Runs platform/device extraction and version matching over the user tweets
/// of a conversation, then resolves version conflicts with the pooled
/// platform evidence.
class ConversationExtractor {
 public:
  ConversationExtractor(const Lexicon& lexicon, const AltSpellingMap& alt_spellings,
                        const VersionTree& tree, ResolverOptions options = {});

  ConversationContext extract(const Conversation& conversation) const;

 private:
  PlatformDeviceExtractor platform_device_;
  const VersionTree& tree_;
  ResolverOptions options_;
};

ConversationContext extract_conversation(const Conversation& conversation, const Lexicon& lexicon,
                                         const AltSpellingMap& alt_spellings,
                                         const VersionTree& tree, ResolverOptions options = {});

/// Prunes the candidate labels of conflicted version items against the
/// conversation's platform evidence: unanimous android evidence removes iOS
/// labels and vice versa. Pruning that would leave no candidates is skipped.
/// Idempotent; never adds labels.
void resolve_conflicts(std::vector<ContextItem>& items,
                       const std::set<PlatformTag>& platform_evidence);

/// {conversation_id, actionable, missing, items} with stable field order.
nlohmann::ordered_json missing_report(const ConversationContext& ctx);

nlohmann::ordered_json context_item_to_json(const ContextItem& item);
ContextItem context_item_from_json(const nlohmann::json& j);

}  // namespace ctxmine
