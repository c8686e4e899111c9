#ifndef IFL_WEB_SCRIPT_H_
#define IFL_WEB_SCRIPT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ifl::web {

// Declarative stand-in for page JavaScript. Wire grammar, ';'-separated:
//   READ_BODY
//   FRAME <url>
//   EXFIL <host>
//   SETCOOKIE <host> <name> <percent-encoded value>
//   POST <url> <percent-encoded body>
// READ_BODY and FRAME append to the script's accumulator; EXFIL sends every
// accumulated chunk to <host> and empties it.
struct Action {
  enum class Kind { kReadBody, kFrame, kExfil, kSetCookie, kPost };

  Kind kind = Kind::kReadBody;
  // URL for kFrame/kPost, host for kExfil/kSetCookie.
  std::string target;
  // kSetCookie only.
  std::string name;
  // Decoded cookie value (kSetCookie) or request body (kPost).
  std::string value;

  static Action ReadBody() { return {}; }
  static Action Frame(std::string url) { return {Kind::kFrame, std::move(url), {}, {}}; }
  static Action Exfil(std::string host) { return {Kind::kExfil, std::move(host), {}, {}}; }
  static Action SetCookie(std::string host, std::string name, std::string value) {
    return {Kind::kSetCookie, std::move(host), std::move(name), std::move(value)};
  }
  static Action Post(std::string url, std::string body) {
    return {Kind::kPost, std::move(url), {}, std::move(body)};
  }

  std::string ToString() const;
  bool operator==(const Action&) const = default;
};

struct Script {
  std::vector<Action> actions;

  bool operator==(const Script&) const = default;
};

// nullopt on any malformed token.
std::optional<std::vector<Action>> ParseActions(std::string_view text);
std::string FormatActions(const std::vector<Action>& actions);
// "<script>" + FormatActions(actions) + "</script>".
std::string ScriptTag(const std::vector<Action>& actions);

// A located <script>...</script> region of a body.
struct ScriptRegion {
  size_t begin = 0;  // Offset of '<' in "<script".
  size_t end = 0;    // One past '>' of "</script>".
  std::string_view inner;
};

// Case-insensitive, non-nested; an unterminated tag ends the scan.
std::vector<ScriptRegion> FindScriptRegions(std::string_view body);

// Total: malformed action text yields a Script with no actions.
std::vector<Script> ParseScripts(std::string_view body);

}  // namespace ifl::web

#endif  // IFL_WEB_SCRIPT_H_
