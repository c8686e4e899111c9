#include "ifl/net/http.h"

#include <charconv>

#include "ifl/base/codec.h"

namespace ifl::net {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Splits off the head (up to the blank line) and parses header lines.
// Returns false on a header line without ':'.
bool ParseHead(std::string_view wire, std::string_view& first_line,
               std::map<std::string, std::string>& headers,
               std::string& body) {
  size_t head_end = wire.find("\n\n");
  std::string_view head = wire.substr(0, head_end);
  if (head_end != std::string_view::npos)
    body = std::string(wire.substr(head_end + 2));
  size_t eol = head.find('\n');
  first_line = head.substr(0, eol);
  while (eol != std::string_view::npos) {
    head.remove_prefix(eol + 1);
    eol = head.find('\n');
    std::string_view line = head.substr(0, eol);
    size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      return false;
    headers[std::string(Trim(line.substr(0, colon)))] =
        std::string(Trim(line.substr(colon + 1)));
  }
  return true;
}

void AppendHeaders(const std::map<std::string, std::string>& headers,
                   std::string& out) {
  for (const auto& [name, value] : headers)
    out += name + ": " + value + "\n";
  out += "\n";
}

}  // namespace

std::string HttpRequest::Target() const {
  return query.empty() ? path : path + "?" + query;
}

std::optional<std::string> HttpRequest::QueryParam(std::string_view name) const {
  auto params = ParseForm(query);
  auto it = params.find(std::string(name));
  if (it == params.end())
    return std::nullopt;
  return it->second;
}

std::string HttpRequest::Serialize() const {
  std::string out = method + " " + Target() + "\n";
  AppendHeaders(headers, out);
  return out + body;
}

// static
std::optional<HttpRequest> HttpRequest::Parse(std::string_view wire) {
  HttpRequest req;
  std::string_view first;
  if (!ParseHead(wire, first, req.headers, req.body))
    return std::nullopt;
  size_t space = first.find(' ');
  if (space == std::string_view::npos || space == 0)
    return std::nullopt;
  req.method = std::string(first.substr(0, space));
  std::string_view target = first.substr(space + 1);
  if (target.empty() || target.front() != '/' ||
      target.find(' ') != std::string_view::npos) {
    return std::nullopt;
  }
  size_t q = target.find('?');
  req.path = std::string(target.substr(0, q));
  if (q != std::string_view::npos)
    req.query = std::string(target.substr(q + 1));
  return req;
}

std::string HttpResponse::StatusLine() const {
  return protocol + " " + std::to_string(status) + " " + reason;
}

std::optional<std::string> HttpResponse::Header(std::string_view name) const {
  auto it = headers.find(std::string(name));
  if (it == headers.end())
    return std::nullopt;
  return it->second;
}

std::string HttpResponse::Serialize() const {
  std::string out = StatusLine() + "\n";
  AppendHeaders(headers, out);
  return out + body;
}

// static
std::optional<HttpResponse> HttpResponse::Parse(std::string_view wire) {
  HttpResponse resp;
  std::string_view first;
  if (!ParseHead(wire, first, resp.headers, resp.body))
    return std::nullopt;
  size_t a = first.find(' ');
  if (a == std::string_view::npos)
    return std::nullopt;
  size_t b = first.find(' ', a + 1);
  std::string_view code = first.substr(a + 1, b == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : b - a - 1);
  auto [ptr, ec] =
      std::from_chars(code.data(), code.data() + code.size(), resp.status);
  if (ec != std::errc() || ptr != code.data() + code.size())
    return std::nullopt;
  resp.protocol = std::string(first.substr(0, a));
  resp.reason =
      b == std::string_view::npos ? "" : std::string(first.substr(b + 1));
  return resp;
}

std::string_view ReasonPhrase(int status) {
  switch (status) {
    case 200:
      return "OK";
    case 220:
      return "Service ready";
    case 400:
      return "Bad Request";
    case 401:
      return "Unauthorized";
    case 403:
      return "Forbidden";
    case 404:
      return "Not Found";
    case 405:
      return "Method Not Allowed";
    default:
      return "Unknown";
  }
}

std::map<std::string, std::string> ParseForm(std::string_view text) {
  std::map<std::string, std::string> out;
  while (!text.empty()) {
    size_t amp = text.find('&');
    std::string_view pair = text.substr(0, amp);
    size_t eq = pair.find('=');
    if (!pair.empty()) {
      std::string key = codec::PercentDecode(pair.substr(0, eq));
      std::string value = eq == std::string_view::npos
                              ? ""
                              : codec::PercentDecode(pair.substr(eq + 1));
      out[key] = value;
    }
    if (amp == std::string_view::npos)
      break;
    text.remove_prefix(amp + 1);
  }
  return out;
}

std::map<std::string, std::string> ParseCookieHeader(std::string_view text) {
  std::map<std::string, std::string> out;
  while (!text.empty()) {
    size_t semi = text.find(';');
    std::string_view pair = Trim(text.substr(0, semi));
    size_t eq = pair.find('=');
    if (eq != std::string_view::npos && eq > 0)
      out[std::string(pair.substr(0, eq))] = std::string(pair.substr(eq + 1));
    if (semi == std::string_view::npos)
      break;
    text.remove_prefix(semi + 1);
  }
  return out;
}

}  // namespace ifl::net
