#include "ifl/server/presets.h"

#include "ifl/base/error.h"
#include "ifl/catalog_data.h"

namespace ifl::server {

namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& field, const std::string& why) {
  throw Error(Errc::kScenarioInvalid, "server." + field + ": " + why);
}

template <typename Enum, size_t N>
Enum ParseEnum(const json& value, const std::string& field,
               const Enum (&all)[N], std::string_view (*name)(Enum)) {
  if (!value.is_string())
    Invalid(field, "expected a string");
  std::string text = value.get<std::string>();
  for (Enum e : all) {
    if (name(e) == text)
      return e;
  }
  Invalid(field, "unknown value '" + text + "'");
}

constexpr AuthPolicy::Kind kAuthKinds[] = {
    AuthPolicy::Kind::kNone, AuthPolicy::Kind::kCode,
    AuthPolicy::Kind::kPassword, AuthPolicy::Kind::kConfirmAction};
constexpr SessionModel kSessions[] = {SessionModel::kCookieToken,
                                      SessionModel::kPerRequestUrlToken,
                                      SessionModel::kNone};
constexpr UploadPolicy kUploads[] = {UploadPolicy::kDisabled,
                                     UploadPolicy::kPhotosOnly,
                                     UploadPolicy::kAny,
                                     UploadPolicy::kAnyRenderedAsText};
constexpr AlertPolicy kAlerts[] = {AlertPolicy::kNone,
                                   AlertPolicy::kFirstConnectionBanner,
                                   AlertPolicy::kPerConnectionConfirm};

std::string_view ProtocolName(Protocol p) {
  return p == Protocol::kFtp ? "ftp" : "http";
}

template <typename T>
T Get(const json& j, const char* key, const std::string& field) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    Invalid(field, "bad or missing value");
  }
}

}  // namespace

std::string_view AuthKindName(AuthPolicy::Kind kind) {
  switch (kind) {
    case AuthPolicy::Kind::kNone:
      return "none";
    case AuthPolicy::Kind::kCode:
      return "code";
    case AuthPolicy::Kind::kPassword:
      return "password";
    case AuthPolicy::Kind::kConfirmAction:
      return "confirm_action";
  }
  return "";
}

std::string_view SessionModelName(SessionModel model) {
  switch (model) {
    case SessionModel::kCookieToken:
      return "cookie_token";
    case SessionModel::kPerRequestUrlToken:
      return "per_request_url_token";
    case SessionModel::kNone:
      return "none";
  }
  return "";
}

std::string_view UploadPolicyName(UploadPolicy policy) {
  switch (policy) {
    case UploadPolicy::kDisabled:
      return "disabled";
    case UploadPolicy::kPhotosOnly:
      return "photos_only";
    case UploadPolicy::kAny:
      return "any";
    case UploadPolicy::kAnyRenderedAsText:
      return "any_rendered_as_text";
  }
  return "";
}

std::string_view AlertPolicyName(AlertPolicy policy) {
  switch (policy) {
    case AlertPolicy::kNone:
      return "none";
    case AlertPolicy::kFirstConnectionBanner:
      return "first_connection_banner";
    case AlertPolicy::kPerConnectionConfirm:
      return "per_connection_confirm";
  }
  return "";
}

std::string CharsetChars(std::string_view name) {
  if (name == "digits")
    return "0123456789";
  if (name == "lowercase")
    return "abcdefghijklmnopqrstuvwxyz";
  if (name == "alnum")
    return "0123456789abcdefghijklmnopqrstuvwxyz";
  throw Error(Errc::kUnsupportedAuth, "charset " + std::string(name));
}

void ApplyServerFields(const json& j, ServerConfig& c) {
  if (!j.is_object())
    Invalid("", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "id") {
      c.id = Get<std::string>(j, "id", key);
    } else if (key == "name") {
      c.name = Get<std::string>(j, "name", key);
    } else if (key == "table_row") {
      c.table_row = Get<int>(j, "table_row", key);
    } else if (key == "platform") {
      c.platform = Get<std::string>(j, "platform", key);
    } else if (key == "port") {
      c.port = Get<int>(j, "port", key);
      if (c.port < 1 || c.port > 65535)
        Invalid(key, "out of range");
    } else if (key == "protocol") {
      c.protocol = ParseEnum(value, key, {Protocol::kHttp, Protocol::kFtp},
                             ProtocolName);
    } else if (key == "encrypted") {
      c.encrypted = Get<bool>(j, "encrypted", key);
    } else if (key == "self_signed") {
      c.self_signed = Get<bool>(j, "self_signed", key);
    } else if (key == "auth") {
      if (!value.is_object() || !value.contains("kind"))
        Invalid(key, "expected {kind, ...}");
      c.auth.kind = ParseEnum(value["kind"], "auth.kind", kAuthKinds, AuthKindName);
      if (value.contains("length"))
        c.auth.length = Get<int>(value, "length", "auth.length");
      if (value.contains("charset"))
        c.auth.charset = Get<std::string>(value, "charset", "auth.charset");
      if (value.contains("secret"))
        c.auth.secret = Get<std::string>(value, "secret", "auth.secret");
      if (c.auth.kind == AuthPolicy::Kind::kCode) {
        if (c.auth.length < 1)
          Invalid("auth.length", "must be at least 1");
        std::string chars = CharsetChars(c.auth.charset);
        if (static_cast<int>(c.auth.secret.size()) != c.auth.length ||
            c.auth.secret.find_first_not_of(chars) != std::string::npos) {
          Invalid("auth.secret", "does not fit length/charset");
        }
      }
    } else if (key == "session") {
      c.session = ParseEnum(value, key, kSessions, SessionModelName);
    } else if (key == "upload") {
      c.upload = ParseEnum(value, key, kUploads, UploadPolicyName);
    } else if (key == "alert") {
      c.alert = ParseEnum(value, key, kAlerts, AlertPolicyName);
    } else if (key == "background_capable") {
      c.background_capable = Get<bool>(j, "background_capable", key);
    } else if (key == "view_uploads") {
      c.view_uploads = Get<bool>(j, "view_uploads", key);
    } else if (key == "server_header") {
      c.server_header = Get<std::string>(j, "server_header", key);
    } else if (key == "index") {
      c.index_body = Get<std::string>(j, "index", key);
    } else if (key == "upload_dir") {
      c.upload_dir = Get<std::string>(j, "upload_dir", key);
    } else {
      Invalid(key, "unknown field");
    }
  }
}

const std::vector<ServerConfig>& BuiltinPresets() {
  static const std::vector<ServerConfig> presets = [] {
    std::vector<ServerConfig> out;
    json doc = json::parse(catalog_data::ServerPresets());
    for (const json& entry : doc.at("presets")) {
      ServerConfig c;
      ApplyServerFields(entry, c);
      out.push_back(std::move(c));
    }
    return out;
  }();
  return presets;
}

const ServerConfig* FindPreset(std::string_view id_or_name) {
  for (const ServerConfig& c : BuiltinPresets()) {
    if (c.id == id_or_name || c.name == id_or_name)
      return &c;
  }
  return nullptr;
}

}  // namespace ifl::server
