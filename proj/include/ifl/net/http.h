#ifndef IFL_NET_HTTP_H_
#define IFL_NET_HTTP_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ifl::net {

// Wire form:
//   <METHOD> <path>[?<query>]\n
//   <Name>: <value>\n ...
//   \n
//   <body>
struct HttpRequest {
  std::string method = "GET";
  std::string path = "/";
  std::string query;
  std::map<std::string, std::string> headers;
  std::string body;

  std::string Target() const;
  std::optional<std::string> QueryParam(std::string_view name) const;
  std::string Serialize() const;
  static std::optional<HttpRequest> Parse(std::string_view wire);
};

// Status line is "<protocol> <status> <reason>".
struct HttpResponse {
  std::string protocol = "HTTP/1.0";
  int status = 200;
  std::string reason = "OK";
  std::map<std::string, std::string> headers;
  std::string body;

  std::string StatusLine() const;
  std::optional<std::string> Header(std::string_view name) const;
  std::string Serialize() const;
  static std::optional<HttpResponse> Parse(std::string_view wire);
};

std::string_view ReasonPhrase(int status);

// "a=1&b=x%20y" -> {a: "1", b: "x y"}. Later duplicates win.
std::map<std::string, std::string> ParseForm(std::string_view text);

// "a=1; b=2" -> {a: "1", b: "2"}.
std::map<std::string, std::string> ParseCookieHeader(std::string_view text);

}  // namespace ifl::net

#endif  // IFL_NET_HTTP_H_
