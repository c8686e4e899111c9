#include "ifl/origin/url.h"

#include <cctype>
#include <vector>

namespace ifl::origin {

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<Scheme> SchemeFromName(std::string_view name) {
  if (name == "http")
    return Scheme::kHttp;
  if (name == "https")
    return Scheme::kHttps;
  if (name == "file")
    return Scheme::kFile;
  if (name == "content")
    return Scheme::kContent;
  if (name == "intent")
    return Scheme::kIntent;
  if (name == "ftp")
    return Scheme::kFtp;
  return std::nullopt;
}

bool IsSchemeChar(char c, bool first) {
  if (std::isalpha(static_cast<unsigned char>(c)))
    return true;
  return !first && (std::isdigit(static_cast<unsigned char>(c)) || c == '+' ||
                    c == '-' || c == '.');
}

bool IsHostChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
         c == '_';
}

// Length of a leading "scheme:" or 0.
size_t SchemePrefixLength(std::string_view text) {
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ':')
      return i;
    if (!IsSchemeChar(text[i], i == 0))
      return 0;
  }
  return 0;
}

// Splits on '/', keeping each segment's offset inside |path|.
struct Segment {
  std::string_view text;
  size_t offset;
};

std::vector<Segment> SplitPath(std::string_view path) {
  std::vector<Segment> out;
  size_t pos = 0;
  while (pos <= path.size()) {
    size_t next = path.find('/', pos);
    if (next == std::string_view::npos)
      next = path.size();
    out.push_back({path.substr(pos, next - pos), pos});
    pos = next + 1;
  }
  return out;
}

std::string DecodePathEscapes(std::string_view path) {
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (path[i] == '%' && i + 2 < path.size()) {
      std::string esc = Lower(path.substr(i + 1, 2));
      if (esc == "20") {
        out.push_back(' ');
        i += 2;
        continue;
      }
      if (esc == "2f") {
        out.push_back('/');
        i += 2;
        continue;
      }
    }
    out.push_back(path[i]);
  }
  return out;
}

// Drops empty and "." segments; |path_offset| locates errors in the input.
std::string NormalizePath(std::string_view raw, size_t path_offset) {
  if (raw.empty())
    return "/";
  if (raw.front() != '/')
    throw MalformedUrl(path_offset, "path must be absolute");
  for (const Segment& seg : SplitPath(raw)) {
    if (seg.text == "..")
      throw MalformedUrl(path_offset + seg.offset, "'..' path segment");
  }
  std::string decoded = DecodePathEscapes(raw);
  std::string out;
  bool trailing = decoded.back() == '/';
  for (const Segment& seg : SplitPath(decoded)) {
    if (seg.text == "..")
      throw MalformedUrl(path_offset, "'..' path segment after decoding");
    if (seg.text.empty() || seg.text == ".")
      continue;
    out += '/';
    out += seg.text;
  }
  if (out.empty() || trailing)
    out += '/';
  return out;
}

// RFC 3986 dot-segment removal over an absolute path; ".." never climbs
// above the root.
std::string RemoveDotSegments(std::string_view path) {
  std::vector<std::string_view> stack;
  std::vector<Segment> segments = SplitPath(path);
  bool trailing = false;
  for (size_t i = 1; i < segments.size(); ++i) {
    std::string_view s = segments[i].text;
    bool last = i + 1 == segments.size();
    if (s == "..") {
      if (!stack.empty())
        stack.pop_back();
      trailing = last;
    } else if (s == "." || s.empty()) {
      trailing = last;
    } else {
      stack.push_back(s);
      trailing = false;
    }
  }
  std::string out;
  for (std::string_view s : stack) {
    out += '/';
    out += s;
  }
  if (out.empty() || trailing)
    out += '/';
  return out;
}

}  // namespace

std::string_view SchemeName(Scheme scheme) {
  switch (scheme) {
    case Scheme::kHttp:
      return "http";
    case Scheme::kHttps:
      return "https";
    case Scheme::kFile:
      return "file";
    case Scheme::kContent:
      return "content";
    case Scheme::kIntent:
      return "intent";
    case Scheme::kFtp:
      return "ftp";
  }
  return "";
}

bool IsLocalScheme(Scheme scheme) {
  return scheme == Scheme::kFile || scheme == Scheme::kContent;
}

bool IsWebScheme(Scheme scheme) {
  return scheme == Scheme::kHttp || scheme == Scheme::kHttps ||
         scheme == Scheme::kFtp;
}

std::optional<int> DefaultPort(Scheme scheme) {
  switch (scheme) {
    case Scheme::kHttp:
      return 80;
    case Scheme::kHttps:
      return 443;
    case Scheme::kFtp:
      return 21;
    default:
      return std::nullopt;
  }
}

std::optional<int> Url::EffectivePort() const {
  return port ? port : DefaultPort(scheme);
}

std::string Url::Spec() const {
  std::string out(SchemeName(scheme));
  out += "://";
  out += host;
  if (port)
    out += ":" + std::to_string(*port);
  for (char c : path) {
    if (c == ' ')
      out += "%20";
    else
      out += c;
  }
  if (scheme == Scheme::kIntent) {
    if (!query.empty())
      out += "#" + query;
    return out;
  }
  if (!query.empty())
    out += "?" + query;
  if (!fragment.empty())
    out += "#" + fragment;
  return out;
}

MalformedUrl::MalformedUrl(size_t position, const std::string& why)
    : Error(Errc::kMalformedUrl, why + " at " + std::to_string(position)),
      position_(position) {}

Url ParseUrl(std::string_view text) {
  for (size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c <= 0x20 || c == 0x7F)
      throw MalformedUrl(i, "whitespace or control character");
  }
  size_t scheme_len = SchemePrefixLength(text);
  if (scheme_len == 0 || text.substr(scheme_len, 3) != "://")
    throw MalformedUrl(0, "expected <scheme>://");
  std::optional<Scheme> scheme = SchemeFromName(Lower(text.substr(0, scheme_len)));
  if (!scheme)
    throw MalformedUrl(0, "unsupported scheme");

  Url url;
  url.scheme = *scheme;
  size_t authority_begin = scheme_len + 3;
  size_t authority_end = text.find_first_of("/?#", authority_begin);
  if (authority_end == std::string_view::npos)
    authority_end = text.size();
  std::string_view authority =
      text.substr(authority_begin, authority_end - authority_begin);

  std::string_view host_text = authority;
  if (size_t colon = authority.find(':'); colon != std::string_view::npos) {
    host_text = authority.substr(0, colon);
    std::string_view port_text = authority.substr(colon + 1);
    size_t port_pos = authority_begin + colon + 1;
    if (port_text.empty() || port_text.size() > 5)
      throw MalformedUrl(port_pos, "bad port");
    int port = 0;
    for (char c : port_text) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw MalformedUrl(port_pos, "bad port");
      port = port * 10 + (c - '0');
    }
    if (port < 1 || port > 65535)
      throw MalformedUrl(port_pos, "port out of range");
    url.port = port;
  }
  for (size_t i = 0; i < host_text.size(); ++i) {
    if (!IsHostChar(host_text[i]))
      throw MalformedUrl(authority_begin + i, "bad host character");
  }
  url.host = Lower(host_text);

  switch (url.scheme) {
    case Scheme::kFile:
      if (!url.host.empty() && url.host != "localhost")
        throw MalformedUrl(authority_begin, "file URLs are host-local");
      if (url.port)
        throw MalformedUrl(authority_begin, "file URLs take no port");
      url.host.clear();
      break;
    case Scheme::kContent:
      if (url.host.empty())
        throw MalformedUrl(authority_begin, "content URLs need an authority");
      if (url.port)
        throw MalformedUrl(authority_begin, "content URLs take no port");
      break;
    case Scheme::kIntent:
      break;
    default:
      if (url.host.empty())
        throw MalformedUrl(authority_begin, "missing host");
      break;
  }

  size_t path_end = text.find_first_of("?#", authority_end);
  if (path_end == std::string_view::npos)
    path_end = text.size();
  url.path = NormalizePath(text.substr(authority_end, path_end - authority_end),
                           authority_end);

  size_t hash = text.find('#', path_end);
  if (path_end < text.size() && text[path_end] == '?') {
    if (url.scheme == Scheme::kIntent)
      throw MalformedUrl(path_end, "intent URLs carry no query");
    size_t qend = hash == std::string_view::npos ? text.size() : hash;
    url.query = std::string(text.substr(path_end + 1, qend - path_end - 1));
  }
  if (hash != std::string_view::npos) {
    std::string payload(text.substr(hash + 1));
    if (url.scheme == Scheme::kIntent)
      url.query = std::move(payload);
    else
      url.fragment = std::move(payload);
  }
  return url;
}

Url ResolveUrl(const Url& base, std::string_view reference) {
  if (reference.empty())
    return base;
  if (SchemePrefixLength(reference) > 0)
    return ParseUrl(reference);
  if (reference.starts_with("//"))
    return ParseUrl(std::string(SchemeName(base.scheme)) + ":" +
                    std::string(reference));

  size_t path_end = reference.find_first_of("?#");
  std::string_view ref_path = reference.substr(0, path_end);
  std::string_view tail =
      path_end == std::string_view::npos ? "" : reference.substr(path_end);

  std::string merged;
  if (ref_path.empty())
    merged = base.path;
  else if (ref_path.front() == '/')
    merged = std::string(ref_path);
  else
    merged = ParentDirectory(base.path) + std::string(ref_path);

  Url resolved = base;
  resolved.path = RemoveDotSegments(merged);
  resolved.query.clear();
  resolved.fragment.clear();
  // Re-parse so the result obeys every ParseUrl invariant.
  return ParseUrl(resolved.Spec() + std::string(tail));
}

std::string ParentDirectory(std::string_view path) {
  size_t slash = path.rfind('/');
  if (slash == std::string_view::npos)
    return "/";
  return std::string(path.substr(0, slash + 1));
}

}  // namespace ifl::origin
