#include "ifl/web/script.h"

#include <cctype>

#include "ifl/base/codec.h"

namespace ifl::web {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

std::vector<std::string_view> Words(std::string_view text) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i]))
      ++i;
    size_t start = i;
    while (i < text.size() && !IsSpace(text[i]))
      ++i;
    if (i > start)
      out.push_back(text.substr(start, i - start));
  }
  return out;
}

// Case-insensitive find of an ASCII |needle|.
size_t FindNoCase(std::string_view hay, std::string_view needle, size_t from) {
  if (needle.size() > hay.size())
    return std::string_view::npos;
  for (size_t i = from; i + needle.size() <= hay.size(); ++i) {
    size_t k = 0;
    while (k < needle.size() &&
           std::tolower(static_cast<unsigned char>(hay[i + k])) == needle[k]) {
      ++k;
    }
    if (k == needle.size())
      return i;
  }
  return std::string_view::npos;
}

}  // namespace

std::string Action::ToString() const {
  switch (kind) {
    case Kind::kReadBody:
      return "READ_BODY";
    case Kind::kFrame:
      return "FRAME " + target;
    case Kind::kExfil:
      return "EXFIL " + target;
    case Kind::kSetCookie:
      return "SETCOOKIE " + target + " " + name + " " +
             codec::PercentEncode(value);
    case Kind::kPost:
      return "POST " + target + " " + codec::PercentEncode(value);
  }
  return "";
}

std::optional<std::vector<Action>> ParseActions(std::string_view text) {
  std::vector<Action> actions;
  while (true) {
    size_t semi = text.find(';');
    std::vector<std::string_view> w = Words(text.substr(0, semi));
    if (!w.empty()) {
      if (w[0] == "READ_BODY" && w.size() == 1) {
        actions.push_back(Action::ReadBody());
      } else if (w[0] == "FRAME" && w.size() == 2) {
        actions.push_back(Action::Frame(std::string(w[1])));
      } else if (w[0] == "EXFIL" && w.size() == 2) {
        actions.push_back(Action::Exfil(std::string(w[1])));
      } else if (w[0] == "SETCOOKIE" && w.size() == 4) {
        actions.push_back(Action::SetCookie(std::string(w[1]), std::string(w[2]),
                                            codec::PercentDecode(w[3])));
      } else if (w[0] == "POST" && (w.size() == 2 || w.size() == 3)) {
        actions.push_back(Action::Post(
            std::string(w[1]), w.size() == 3 ? codec::PercentDecode(w[2]) : ""));
      } else {
        return std::nullopt;
      }
    }
    if (semi == std::string_view::npos)
      break;
    text.remove_prefix(semi + 1);
  }
  return actions;
}

std::string FormatActions(const std::vector<Action>& actions) {
  std::string out;
  for (const Action& a : actions) {
    if (!out.empty())
      out += ";";
    out += a.ToString();
  }
  return out;
}

std::string ScriptTag(const std::vector<Action>& actions) {
  return "<script>" + FormatActions(actions) + "</script>";
}

std::vector<ScriptRegion> FindScriptRegions(std::string_view body) {
  std::vector<ScriptRegion> out;
  size_t pos = 0;
  while (true) {
    size_t open = FindNoCase(body, "<script", pos);
    if (open == std::string_view::npos)
      break;
    size_t after = open + 7;
    // "<scripts>" or "<scriptx" is some other tag.
    if (after < body.size() && body[after] != '>' && !IsSpace(body[after])) {
      pos = after;
      continue;
    }
    size_t open_end = body.find('>', after);
    if (open_end == std::string_view::npos)
      break;
    size_t close = FindNoCase(body, "</script>", open_end + 1);
    if (close == std::string_view::npos)
      break;
    out.push_back({open, close + 9,
                   body.substr(open_end + 1, close - open_end - 1)});
    pos = close + 9;
  }
  return out;
}

std::vector<Script> ParseScripts(std::string_view body) {
  std::vector<Script> out;
  for (const ScriptRegion& region : FindScriptRegions(body)) {
    Script script;
    if (auto actions = ParseActions(region.inner))
      script.actions = std::move(*actions);
    out.push_back(std::move(script));
  }
  return out;
}

}  // namespace ifl::web
