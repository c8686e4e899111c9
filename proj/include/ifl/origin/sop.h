#ifndef IFL_ORIGIN_SOP_H_
#define IFL_ORIGIN_SOP_H_

#include <optional>
#include <string>
#include <string_view>

#include "ifl/origin/url.h"

namespace ifl::origin {

struct Origin {
  Scheme scheme = Scheme::kHttp;
  std::string host;
  std::optional<int> port;
  // Parent directory of the document, only under the enhanced policy and
  // only for local schemes.
  std::optional<std::string> path_dir;

  std::string Serialize() const;
  bool operator==(const Origin&) const = default;
};

enum class SopMode {
  // File-to-file access is never checked.
  kPermissive,
  // Classic (scheme, host, port) comparison.
  kLegacy,
  // Adds the parent directory to the tuple for local schemes.
  kEnhanced,
};

struct SopPolicy {
  SopMode mode = SopMode::kLegacy;
  // Developer loosening of file-to-file checks; drops the directory element
  // under kEnhanced.
  bool allow_file_from_file = false;
  // Broken web-to-file enforcement in the engine.
  bool cross_scheme_http_to_file = false;
};

std::string_view SopModeName(SopMode mode);
std::optional<SopMode> ParseSopMode(std::string_view name);

enum class DenyReason { kCrossScheme, kHost, kPort, kPathDir, kScheme };

std::string_view DenyReasonName(DenyReason reason);

struct Decision {
  bool allowed = true;
  // Set exactly when !allowed.
  std::optional<DenyReason> reason;

  static Decision Allow() { return {}; }
  static Decision Deny(DenyReason r) { return {false, r}; }

  // "allow" or "deny:<reason>".
  std::string ToString() const;
  bool operator==(const Decision&) const = default;
};

Origin OriginOf(const Url& url, const SopPolicy& policy);

// Whether a document in |subject| may read the resource at |target|.
// content:// and intent:// are never same-origin with anything.
Decision MayAccess(const Origin& subject, const Url& target,
                   const SopPolicy& policy);

}  // namespace ifl::origin

#endif  // IFL_ORIGIN_SOP_H_
