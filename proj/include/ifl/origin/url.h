#ifndef IFL_ORIGIN_URL_H_
#define IFL_ORIGIN_URL_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "ifl/base/error.h"

namespace ifl::origin {

enum class Scheme { kHttp, kHttps, kFile, kContent, kIntent, kFtp };

std::string_view SchemeName(Scheme scheme);
// file:// and content:// address data on the device itself.
bool IsLocalScheme(Scheme scheme);
bool IsWebScheme(Scheme scheme);
std::optional<int> DefaultPort(Scheme scheme);

// A parsed absolute URL.
//
// Local schemes keep an empty host for file:// ("localhost" folds to empty);
// content:// keeps the provider authority as host. For intent:// the opaque
// "#Intent;...;end" payload is stored in |query| and |fragment| stays empty.
struct Url {
  Scheme scheme = Scheme::kHttp;
  std::string host;
  std::optional<int> port;
  std::string path = "/";
  std::string query;
  std::string fragment;

  // Port after applying the scheme default (http 80, https 443, ftp 21).
  std::optional<int> EffectivePort() const;
  std::string Spec() const;

  bool operator==(const Url&) const = default;
};

class MalformedUrl : public Error {
 public:
  MalformedUrl(size_t position, const std::string& why);
  size_t position() const { return position_; }

 private:
  size_t position_;
};

// Accepts http, https, file, content, intent and ftp. Rejects whitespace and
// ".." segments; "." segments and repeated slashes are dropped, and %20/%2F
// in the path are decoded.
Url ParseUrl(std::string_view text);

// Resolves |reference| (absolute, scheme-relative, absolute-path or relative
// path) against |base|. Dot segments in the reference are resolved here, so
// "../x" is legal input even though ParseUrl rejects "..".
Url ResolveUrl(const Url& base, std::string_view reference);

// Directory part of |path| including the trailing slash.
std::string ParentDirectory(std::string_view path);

}  // namespace ifl::origin

#endif  // IFL_ORIGIN_URL_H_
