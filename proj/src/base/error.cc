#include "ifl/base/error.h"

namespace ifl {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kDuplicateApp:
      return "duplicate-app";
    case Errc::kUnknownApp:
      return "unknown-app";
    case Errc::kPermissionDenied:
      return "permission-denied";
    case Errc::kNotFound:
      return "not-found";
    case Errc::kInvalidPath:
      return "invalid-path";
    case Errc::kMalformedUrl:
      return "malformed-url";
    case Errc::kProviderUnavailable:
      return "provider-unavailable";
    case Errc::kComponentNotExported:
      return "component-not-exported";
    case Errc::kPermissionRequired:
      return "permission-required";
    case Errc::kUnknownCommand:
      return "unknown-command";
    case Errc::kAuthFailed:
      return "auth-failed";
    case Errc::kUnreachable:
      return "unreachable";
    case Errc::kNotPermitted:
      return "not-permitted";
    case Errc::kChannelRefused:
      return "channel-refused";
    case Errc::kConnectionRejected:
      return "connection-rejected";
    case Errc::kNoMatch:
      return "no-match";
    case Errc::kUnsupportedAuth:
      return "unsupported-auth";
    case Errc::kScenarioInvalid:
      return "scenario-invalid";
  }
  return "unknown";
}

std::optional<Errc> ParseErrc(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Errc::kScenarioInvalid); ++i) {
    if (ErrcName(static_cast<Errc>(i)) == name)
      return static_cast<Errc>(i);
  }
  return std::nullopt;
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(ErrcName(code)) + ": " + what),
      code_(code) {}

}  // namespace ifl
