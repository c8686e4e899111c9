#ifndef IFL_BASE_ERROR_H_
#define IFL_BASE_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ifl {

// Every failure the simulator can report. The string form doubles as the
// "blocked at" stage name in attack reports.
enum class Errc {
  kDuplicateApp,
  kUnknownApp,
  kPermissionDenied,
  kNotFound,
  kInvalidPath,
  kMalformedUrl,
  kProviderUnavailable,
  kComponentNotExported,
  kPermissionRequired,
  kUnknownCommand,
  kAuthFailed,
  kUnreachable,
  kNotPermitted,
  kChannelRefused,
  kConnectionRejected,
  kNoMatch,
  kUnsupportedAuth,
  kScenarioInvalid,
};

std::string_view ErrcName(Errc code);
std::optional<Errc> ParseErrc(std::string_view name);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace ifl

#endif  // IFL_BASE_ERROR_H_
