#include "ctxmine/versiontree.hpp"

#include <vector>

#include "ctxmine/text.hpp"

namespace ctxmine {

VersionTree VersionTree::build(const std::map<VersionLabel, std::set<VersionString>>& lists) {
  VersionTree tree;
  for (const auto& [label, versions] : lists) {
    for (const VersionString& version : versions) {
      Node* node = &tree.root_;
      for (int component : version.components) {
        auto& child = node->children[component];
        if (!child) child = std::make_unique<Node>();
        node = child.get();
        node->marks.insert(label);
      }
      node->listed.insert(label);
    }
  }
  return tree;
}

std::size_t VersionTree::count_nodes(const Node& node) {
  std::size_t n = 0;
  for (const auto& [component, child] : node.children) n += 1 + count_nodes(*child);
  return n;
}

std::size_t VersionTree::node_count() const { return count_nodes(root_); }

std::optional<VersionMatch> VersionTree::match(const VersionString& version,
                                               std::string_view previous_token) const {
  const Node* node = &root_;
  std::vector<const Node*> path;  // visited nodes, one per consumed component
  std::size_t consumed = 0;
  for (int component : version.components) {
    auto it = node->children.find(component);
    if (it == node->children.end()) break;
    node = it->second.get();
    path.push_back(node);
    ++consumed;
  }

  VersionMatch m;
  m.input_depth = version.components.size();

  if (consumed == version.components.size() && !path.empty() && !path.back()->marks.empty()) {
    m.matched_version = version;
    m.candidate_labels = path.back()->marks;
    m.ancestor_fallback = false;
  } else {
    // deepest visited node that is an exact listed version for some label
    std::size_t depth = path.size();
    while (depth > 0 && path[depth - 1]->listed.empty()) --depth;
    if (depth == 0) return std::nullopt;
    m.matched_version.components.assign(version.components.begin(),
                                        version.components.begin() + depth);
    m.candidate_labels = path[depth - 1]->listed;
    m.ancestor_fallback = true;

    // system version lists are complete, so a version deeper than any listed
    // one cannot be a system version
    std::erase_if(m.candidate_labels,
                  [](const VersionLabel& l) { return l.kind == VersionKind::system; });
  }

  // with several system candidates, a preceding platform word decides
  std::size_t system_count = 0;
  for (const VersionLabel& l : m.candidate_labels) {
    if (l.kind == VersionKind::system) ++system_count;
  }
  if (system_count >= 2 && (previous_token == "ios" || previous_token == "android")) {
    PlatformTag keep = previous_token == "ios" ? PlatformTag::ios : PlatformTag::android;
    std::erase_if(m.candidate_labels, [&](const VersionLabel& l) {
      return l.kind == VersionKind::system && l.platform != keep;
    });
  }

  if (m.candidate_labels.empty()) return std::nullopt;
  return m;
}

std::optional<NormalizedVersionToken> normalize_version_token(
    std::string_view token, const std::set<std::string>& platforms) {
  std::u32string cps = text::decode_utf8(token);

  std::size_t digit_pos = 0;
  while (digit_pos < cps.size() && !text::is_ascii_digit(cps[digit_pos])) ++digit_pos;
  if (digit_pos == cps.size()) return std::nullopt;

  NormalizedVersionToken out;
  if (digit_pos > 0) {
    std::string prefix = text::encode_utf8(std::u32string_view(cps).substr(0, digit_pos));
    if (platforms.count(prefix)) {
      out.platform_prefix = prefix;
      out.prefix_start = 0;
      out.prefix_end = digit_pos;
    }
  }

  // longest digits(.digits)* run from the first digit; the rest is junk
  std::size_t pos = digit_pos;
  VersionString version;
  while (true) {
    std::size_t start = pos;
    while (pos < cps.size() && text::is_ascii_digit(cps[pos])) ++pos;
    std::size_t len = pos - start;
    if (len == 0 || len > 9) {
      if (version.components.empty()) return std::nullopt;
      pos = start - 1;  // un-consume the trailing dot
      break;
    }
    long long value = 0;
    for (std::size_t k = start; k < pos; ++k) value = value * 10 + (cps[k] - U'0');
    version.components.push_back(static_cast<int>(value));
    if (pos < cps.size() && cps[pos] == U'.' && pos + 1 < cps.size() &&
        text::is_ascii_digit(cps[pos + 1])) {
      ++pos;
      continue;
    }
    break;
  }

  // bare integers longer than 4 digits are years / ids, not versions
  if (version.components.size() == 1) {
    std::size_t digits = pos - digit_pos;
    if (digits > 4) return std::nullopt;
  }

  out.version = std::move(version);
  out.core_start = digit_pos;
  out.core_end = pos;
  return out;
}

}  // namespace ctxmine
