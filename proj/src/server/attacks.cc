#include "ifl/server/attacks.h"

#include <algorithm>

#include "ifl/base/codec.h"
#include "ifl/base/error.h"
#include "ifl/server/app_server.h"
#include "ifl/server/presets.h"
#include "ifl/web/script.h"

namespace ifl::server {

HttpSession::HttpSession(World& world, std::string actor, std::string host,
                         int port)
    : world_(world), actor_(std::move(actor)), host_(std::move(host)) {
  conn_ = world_.net.Connect(actor_, host_, port);
}

net::HttpResponse HttpSession::Send(const std::string& method,
                                    const std::string& path,
                                    const std::string& query,
                                    const std::string& body) {
  net::HttpRequest req;
  req.method = method;
  req.path = path;
  req.query = query;
  if (token_)
    req.query += (req.query.empty() ? "token=" : "&token=") + *token_;
  req.headers["Host"] = host_;
  if (cookie_)
    req.headers["Cookie"] = "sid=" + *cookie_;
  req.body = body;
  std::optional<net::HttpResponse> resp =
      net::HttpResponse::Parse(world_.net.Request(conn_.id, req.Serialize()));
  if (!resp)
    throw Error(Errc::kUnreachable, "garbled response from " + host_);
  if (auto set = resp->Header("Set-Cookie"); set && set->starts_with("sid="))
    cookie_ = set->substr(4);
  if (auto token = resp->Header("X-Request-Token"))
    token_ = *token;
  return *resp;
}

void RequireOk(const net::HttpResponse& resp, const std::string& what) {
  if (resp.status < 400)
    return;
  std::string why = what + " -> " + std::to_string(resp.status) + " " +
                    resp.Header("X-Deny-Reason").value_or("");
  switch (resp.status) {
    case 401:
      throw Error(Errc::kAuthFailed, why);
    case 403:
      throw Error(Errc::kNotPermitted, why);
    case 404:
      throw Error(Errc::kNotFound, why);
    default:
      throw Error(Errc::kInvalidPath, why);
  }
}

std::string Download(World& world, HttpSession& session,
                     const std::string& relative) {
  net::HttpResponse resp =
      session.Send("GET", "/download", "path=" + codec::PercentEncode(relative));
  RequireOk(resp, "download " + relative);
  world.AddLoot("download:" + relative, resp.body);
  return resp.body;
}

std::string DirectDownload(World& world, const std::string& actor,
                           const std::string& host, int port,
                           const std::string& relative) {
  HttpSession session(world, actor, host, port);
  RequireOk(session.Send("GET", "/"), "index");
  return Download(world, session, relative);
}

BruteForceResult BruteForce(World& world, HttpSession& session, int length,
                            const std::string& charset) {
  const uint64_t base = charset.size();
  uint64_t space = 1;
  for (int i = 0; i < length; ++i)
    space *= base;
  std::string code(length, charset.front());
  for (uint64_t n = 0; n < space; ++n) {
    uint64_t rest = n;
    for (int i = length - 1; i >= 0; --i) {
      code[i] = charset[rest % base];
      rest /= base;
    }
    if (session.Send("POST", "/auth", "", "code=" + code).status == 200) {
      world.trace.Record({"brute-force", "", code,
                          "found after " + std::to_string(n + 1) + " attempts"});
      return {code, n + 1};
    }
  }
  world.trace.Record({"brute-force", "", "",
                      "exhausted " + std::to_string(space) + " codes"});
  throw Error(Errc::kAuthFailed, "code space exhausted");
}

std::string SniffReplay(World& world, const std::string& sniffer,
                        const std::string& host, int port,
                        const std::string& relative) {
  std::optional<std::string> auth_body, cookie, token;
  for (const net::Frame& frame : world.net.Sniff(sniffer, net::Scope::kIntranet)) {
    if (frame.host != host || frame.port != port || frame.client == sniffer)
      continue;
    if (auto req = net::HttpRequest::Parse(frame.request)) {
      if (req->method == "POST" && req->path == "/auth" && !auth_body)
        auth_body = req->body;
      if (auto it = req->headers.find("Cookie"); it != req->headers.end()) {
        auto jar = net::ParseCookieHeader(it->second);
        if (jar.contains("sid"))
          cookie = jar["sid"];
      }
    }
    if (auto resp = net::HttpResponse::Parse(frame.response)) {
      if (auto t = resp->Header("X-Request-Token"))
        token = *t;
    }
  }

  HttpSession session(world, sniffer, host, port);
  if (auth_body) {
    world.trace.Record({"credential-captured", sniffer, host, "auth-secret"});
    RequireOk(session.Send("POST", "/auth", "", *auth_body), "replayed auth");
  } else if (cookie) {
    world.trace.Record({"credential-captured", sniffer, host, "session-cookie"});
    session.set_cookie(*cookie);
  } else if (token) {
    world.trace.Record({"credential-captured", sniffer, host, "url-token"});
    net::HttpResponse resp = session.Send(
        "GET", "/download",
        "path=" + codec::PercentEncode(relative) + "&token=" + *token);
    RequireOk(resp, "replayed token");
    world.AddLoot("download:" + relative, resp.body);
    return resp.body;
  } else {
    world.trace.Record({"no-credential", sniffer, host, ""});
    throw Error(Errc::kAuthFailed, "nothing usable in the capture");
  }
  return Download(world, session, relative);
}

std::vector<web::Exfiltration> CsrfUploadAttack(
    World& world, web::StaticSite& adversary_site, const std::string& sink_host,
    web::Browser& victim, const std::string& host, int port,
    const std::string& relative, const std::string& file_name) {
  std::string server = "http://" + host + ":" + std::to_string(port);
  std::string planted =
      "<html><title>shared photos</title>" +
      web::ScriptTag({web::Action::Frame("/download?path=" +
                                         codec::PercentEncode(relative)),
                      web::Action::Exfil(sink_host)}) +
      "</html>";
  std::string page =
      "<html><title>free wallpapers</title>" +
      web::ScriptTag({web::Action::Post(server + "/upload?name=" + file_name,
                                        planted)}) +
      "</html>";
  adversary_site.Put("/wallpapers.html", page);
  world.trace.Record({"csrf-page", "", adversary_site.UrlFor("/wallpapers.html"),
                      file_name});

  victim.Navigate(adversary_site.UrlFor("/wallpapers.html"));
  web::RenderResult viewed = victim.Navigate(server + "/view?name=" + file_name);
  return viewed.exfiltrated;
}

const std::vector<FingerprintEntry>& FingerprintDatabase() {
  static const std::vector<FingerprintEntry> db = [] {
    std::vector<FingerprintEntry> out;
    for (const ServerConfig& preset : BuiltinPresets()) {
      World scratch(0);
      scratch.fs.InstallApp("fingerprint.probe", {});
      AppServer server(scratch, "fingerprint.probe", "probe", preset);
      net::Node client{"scanner", net::NodeKind::kIntranetHost, "scanner", {}, {}};
      net::HttpRequest index;
      out.push_back({preset.id, preset.name, preset.port,
                     ResponseSignature(server.Handle(0, client, index))});
    }
    return out;
  }();
  return db;
}

std::vector<Guess> FingerprintProbe(World& world, const std::string& actor,
                                    const std::string& host) {
  const auto& db = FingerprintDatabase();
  std::vector<Guess> exact, by_port;
  for (int port : world.net.ScanPorts(actor, host)) {
    bool known = std::any_of(db.begin(), db.end(),
                             [&](const auto& e) { return e.port == port; });
    if (!known)
      continue;
    std::string signature;
    try {
      HttpSession session(world, actor, host, port);
      signature = ResponseSignature(session.Send("GET", "/"));
    } catch (const Error&) {
      // Refused before "/" was served; the port alone has to do.
    }
    std::vector<Guess> port_exact;
    for (const FingerprintEntry& e : db) {
      if (e.port == port && !signature.empty() && e.signature == signature)
        port_exact.push_back({e.id, e.name, port, true});
    }
    if (!port_exact.empty()) {
      exact.insert(exact.end(), port_exact.begin(), port_exact.end());
      continue;
    }
    for (const FingerprintEntry& e : db) {
      if (e.port == port)
        by_port.push_back({e.id, e.name, port, false});
    }
  }
  exact.insert(exact.end(), by_port.begin(), by_port.end());
  if (exact.empty())
    throw Error(Errc::kNoMatch, "no known server on " + host);
  world.trace.Record({"fingerprint", actor, host,
                      exact.front().id +
                          (exact.front().signature_match ? " (signature)"
                                                         : " (port)")});
  return exact;
}

}  // namespace ifl::server
