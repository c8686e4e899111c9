#include "ifl/origin/sop.h"

namespace ifl::origin {

namespace {

bool IsOpaque(Scheme scheme) {
  return scheme == Scheme::kContent || scheme == Scheme::kIntent;
}

}  // namespace

std::string Origin::Serialize() const {
  std::string out(SchemeName(scheme));
  out += "://";
  out += host;
  if (port)
    out += ":" + std::to_string(*port);
  if (path_dir)
    out += " [" + *path_dir + "]";
  return out;
}

std::string_view SopModeName(SopMode mode) {
  switch (mode) {
    case SopMode::kPermissive:
      return "permissive";
    case SopMode::kLegacy:
      return "legacy";
    case SopMode::kEnhanced:
      return "enhanced";
  }
  return "";
}

std::optional<SopMode> ParseSopMode(std::string_view name) {
  if (name == "permissive")
    return SopMode::kPermissive;
  if (name == "legacy")
    return SopMode::kLegacy;
  if (name == "enhanced")
    return SopMode::kEnhanced;
  return std::nullopt;
}

std::string_view DenyReasonName(DenyReason reason) {
  switch (reason) {
    case DenyReason::kCrossScheme:
      return "cross-scheme";
    case DenyReason::kHost:
      return "host";
    case DenyReason::kPort:
      return "port";
    case DenyReason::kPathDir:
      return "path_dir";
    case DenyReason::kScheme:
      return "scheme";
  }
  return "";
}

std::string Decision::ToString() const {
  if (allowed)
    return "allow";
  return "deny:" + std::string(DenyReasonName(*reason));
}

Origin OriginOf(const Url& url, const SopPolicy& policy) {
  Origin origin;
  origin.scheme = url.scheme;
  origin.host = url.scheme == Scheme::kFile ? "localhost" : url.host;
  origin.port = url.EffectivePort();
  if (policy.mode == SopMode::kEnhanced && IsLocalScheme(url.scheme))
    origin.path_dir = ParentDirectory(url.path);
  return origin;
}

Decision MayAccess(const Origin& subject, const Url& target,
                   const SopPolicy& policy) {
  if (IsOpaque(subject.scheme) || IsOpaque(target.scheme))
    return Decision::Deny(DenyReason::kScheme);

  Origin other = OriginOf(target, policy);
  if (subject.scheme != other.scheme) {
    if (IsWebScheme(subject.scheme) && other.scheme == Scheme::kFile) {
      return policy.cross_scheme_http_to_file
                 ? Decision::Allow()
                 : Decision::Deny(DenyReason::kCrossScheme);
    }
    return Decision::Deny(DenyReason::kScheme);
  }

  if (subject.scheme == Scheme::kFile) {
    if (policy.mode == SopMode::kPermissive)
      return Decision::Allow();
    if (subject.host != other.host)
      return Decision::Deny(DenyReason::kHost);
    if (policy.mode == SopMode::kLegacy || policy.allow_file_from_file)
      return Decision::Allow();
    // Enhanced: the parent directories must match exactly; a parent
    // directory does not reach into its subdirectories.
    if (!subject.path_dir || subject.path_dir != other.path_dir)
      return Decision::Deny(DenyReason::kPathDir);
    return Decision::Allow();
  }

  if (subject.host != other.host)
    return Decision::Deny(DenyReason::kHost);
  if (subject.port != other.port)
    return Decision::Deny(DenyReason::kPort);
  return Decision::Allow();
}

}  // namespace ifl::origin
