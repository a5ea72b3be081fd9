#include "ctxmine/types.hpp"

#include "ctxmine/error.hpp"

namespace ctxmine {

std::string_view to_string(PlatformTag tag) {
  switch (tag) {
    case PlatformTag::ios: return "ios";
    case PlatformTag::android: return "android";
    case PlatformTag::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(VersionKind kind) {
  return kind == VersionKind::system ? "system" : "app";
}

std::string_view to_string(ItemType type) {
  switch (type) {
    case ItemType::platform: return "platform";
    case ItemType::device: return "device";
    case ItemType::app_version: return "app_version";
    case ItemType::system_version: return "system_version";
  }
  return "platform";
}

std::optional<PlatformTag> platform_tag_from_string(std::string_view s) {
  if (s == "ios") return PlatformTag::ios;
  if (s == "android") return PlatformTag::android;
  if (s == "unknown") return PlatformTag::unknown;
  return std::nullopt;
}

std::optional<ItemType> item_type_from_string(std::string_view s) {
  if (s == "platform") return ItemType::platform;
  if (s == "device") return ItemType::device;
  if (s == "app_version") return ItemType::app_version;
  if (s == "system_version") return ItemType::system_version;
  return std::nullopt;
}

std::string VersionLabel::to_string() const {
  std::string out{ctxmine::to_string(platform)};
  out += '-';
  out += ctxmine::to_string(kind);
  if (app_name) {
    out += ':';
    out += *app_name;
  }
  return out;
}

VersionLabel VersionLabel::system(PlatformTag platform) {
  return VersionLabel{platform, VersionKind::system, std::nullopt};
}

VersionLabel VersionLabel::app(PlatformTag platform, std::string app_name) {
  return VersionLabel{platform, VersionKind::app, std::move(app_name)};
}

std::string VersionString::to_string() const {
  std::string out;
  for (size_t i = 0; i < components.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(components[i]);
  }
  return out;
}

std::optional<VersionString> VersionString::parse(std::string_view s) {
  if (s.empty()) return std::nullopt;
  VersionString v;
  size_t i = 0;
  while (i < s.size()) {
    size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == start || i - start > 9) return std::nullopt;
    v.components.push_back(static_cast<int>(std::stoll(std::string(s.substr(start, i - start)))));
    if (i == s.size()) break;
    if (s[i] != '.' || i + 1 == s.size()) return std::nullopt;
    ++i;
  }
  return v;
}

}  // namespace ctxmine
