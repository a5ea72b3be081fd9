#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctxmine {

enum class PlatformTag { ios, android, unknown };
enum class VersionKind { system, app };
enum class ItemType { platform, device, app_version, system_version };

std::string_view to_string(PlatformTag tag);
std::string_view to_string(VersionKind kind);
std::string_view to_string(ItemType type);

std::optional<PlatformTag> platform_tag_from_string(std::string_view s);
std::optional<ItemType> item_type_from_string(std::string_view s);

/// Identifies one version list: a platform's system versions, or one app's
/// release history on a platform. The same value doubles as the label
/// attached to version tree nodes.
struct VersionLabel {
  PlatformTag platform = PlatformTag::unknown;
  VersionKind kind = VersionKind::system;
  std::optional<std::string> app_name;  // present iff kind == app

  auto operator<=>(const VersionLabel&) const = default;

  /// "ios-system", "android-app:spotify", ...
  std::string to_string() const;

  static VersionLabel system(PlatformTag platform);
  static VersionLabel app(PlatformTag platform, std::string app_name);
};

/// A dot-separated version, e.g. "8.0.1" <-> {8, 0, 1}.
struct VersionString {
  std::vector<int> components;

  auto operator<=>(const VersionString&) const = default;

  std::string to_string() const;

  /// Strict parse: digits and separating dots only. "1.1a" or "" fail.
  static std::optional<VersionString> parse(std::string_view s);
};

}  // namespace ctxmine
