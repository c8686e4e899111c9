#include "ifl/web/document.h"

#include <cctype>
#include <map>
#include <optional>

#include "ifl/base/error.h"

namespace ifl::web {

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Attributes of the tag text between the name and '>'.
std::map<std::string, std::string> ParseAttributes(std::string_view text) {
  std::map<std::string, std::string> attrs;
  size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  while (i < text.size()) {
    skip_space();
    size_t name_begin = i;
    while (i < text.size() && text[i] != '=' &&
           !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::string name = Lower(text.substr(name_begin, i - name_begin));
    skip_space();
    if (i >= text.size() || text[i] != '=') {
      if (!name.empty())
        attrs.emplace(name, "");
      if (i == name_begin)
        ++i;
      continue;
    }
    ++i;
    skip_space();
    std::string value;
    if (i < text.size() && (text[i] == '"' || text[i] == '\'')) {
      char quote = text[i++];
      size_t close = text.find(quote, i);
      if (close == std::string_view::npos)
        close = text.size();
      value = std::string(text.substr(i, close - i));
      i = close + 1;
    } else {
      size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
      value = std::string(text.substr(start, i - start));
    }
    if (!name.empty())
      attrs.emplace(name, DecodeEntities(value));
  }
  return attrs;
}

std::string StripScripts(std::string_view body) {
  std::string out;
  size_t pos = 0;
  for (const ScriptRegion& r : FindScriptRegions(body)) {
    out += body.substr(pos, r.begin - pos);
    pos = r.end;
  }
  out += body.substr(pos);
  return out;
}

std::optional<origin::Url> TryResolve(const origin::Url& base,
                                      std::string_view ref) {
  try {
    return origin::ResolveUrl(base, ref);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::string DecodeEntities(std::string_view text) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''},
      {"&amp;", '&'}};
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    bool replaced = false;
    if (text[i] == '&') {
      for (const auto& [entity, c] : kEntities) {
        if (text.substr(i, entity.size()) == entity) {
          out.push_back(c);
          i += entity.size() - 1;
          replaced = true;
          break;
        }
      }
    }
    if (!replaced)
      out.push_back(text[i]);
  }
  return out;
}

Document ParseDocument(const origin::Url& url, std::string body,
                       const origin::SopPolicy& policy,
                       std::string content_type) {
  Document doc;
  doc.url = url;
  doc.origin = origin::OriginOf(url, policy);
  doc.body = std::move(body);
  doc.content_type = std::move(content_type);
  if (!doc.content_type.starts_with("text/html"))
    return doc;

  doc.scripts = ParseScripts(doc.body);
  std::string markup = StripScripts(doc.body);
  std::string_view view = markup;
  std::string lowered = Lower(markup);
  size_t pos = 0;
  while ((pos = view.find('<', pos)) != std::string_view::npos) {
    size_t name_end = pos + 1;
    while (name_end < view.size() &&
           std::isalpha(static_cast<unsigned char>(view[name_end]))) {
      ++name_end;
    }
    size_t tag_end = view.find('>', name_end);
    if (tag_end == std::string_view::npos)
      break;
    std::string name = Lower(view.substr(pos + 1, name_end - pos - 1));
    auto attrs = ParseAttributes(view.substr(name_end, tag_end - name_end));
    size_t next = tag_end + 1;

    if (name == "title" && doc.title.empty()) {
      size_t close = lowered.find("</title>", next);
      if (close != std::string_view::npos) {
        doc.title = DecodeEntities(view.substr(next, close - next));
        next = close + 8;
      }
    } else if (name == "iframe" && attrs.contains("src")) {
      if (auto target = TryResolve(url, attrs["src"]))
        doc.frames.push_back(std::move(*target));
    } else if (name == "a" && attrs.contains("href")) {
      size_t close = lowered.find("</a>", next);
      std::string text;
      if (close != std::string_view::npos) {
        text = std::string(view.substr(next, close - next));
        next = close + 4;
      }
      if (auto target = TryResolve(url, attrs["href"]))
        doc.links.push_back({std::move(text), std::move(*target)});
    }
    pos = next;
  }
  return doc;
}

}  // namespace ifl::web
