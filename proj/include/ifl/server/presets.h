#ifndef IFL_SERVER_PRESETS_H_
#define IFL_SERVER_PRESETS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ifl::server {

enum class Protocol { kHttp, kFtp };

struct AuthPolicy {
  enum class Kind { kNone, kCode, kPassword, kConfirmAction };
  Kind kind = Kind::kNone;
  // kCode only.
  int length = 0;
  std::string charset = "digits";
  // Expected code or password.
  std::string secret;
};

enum class SessionModel { kCookieToken, kPerRequestUrlToken, kNone };
enum class UploadPolicy { kDisabled, kPhotosOnly, kAny, kAnyRenderedAsText };
enum class AlertPolicy { kNone, kFirstConnectionBanner, kPerConnectionConfirm };

struct ServerConfig {
  std::string id;
  std::string name;
  // Row in the published weakness table, 0 for variants outside it.
  int table_row = 0;
  std::string platform;
  int port = 8080;
  Protocol protocol = Protocol::kHttp;
  bool encrypted = false;
  bool self_signed = false;
  AuthPolicy auth;
  SessionModel session = SessionModel::kCookieToken;
  UploadPolicy upload = UploadPolicy::kDisabled;
  AlertPolicy alert = AlertPolicy::kNone;
  bool background_capable = false;
  // Whether GET /view renders uploaded files at all.
  bool view_uploads = false;
  std::string server_header;
  std::string index_body;
  // Relative to the app's base_dir.
  std::string upload_dir = "uploads/";
};

std::string_view AuthKindName(AuthPolicy::Kind kind);
std::string_view SessionModelName(SessionModel model);
std::string_view UploadPolicyName(UploadPolicy policy);
std::string_view AlertPolicyName(AlertPolicy policy);

// Ordered characters of a named charset: digits, lowercase, alnum.
// Throws Error(kUnsupportedAuth) for unknown names.
std::string CharsetChars(std::string_view name);

// Overwrites the fields present in |j|. Throws Error(kScenarioInvalid)
// naming the offending field.
void ApplyServerFields(const nlohmann::json& j, ServerConfig& config);

// The built-in preset database, in file order.
const std::vector<ServerConfig>& BuiltinPresets();
// By id or display name.
const ServerConfig* FindPreset(std::string_view id_or_name);

}  // namespace ifl::server

#endif  // IFL_SERVER_PRESETS_H_
