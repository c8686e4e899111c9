#include "ifl/server/app_server.h"

#include "ifl/base/codec.h"
#include "ifl/base/error.h"
#include "ifl/vfs/file_system.h"

namespace ifl::server {

namespace {

bool IsPhotoName(std::string_view name) {
  for (std::string_view ext : {".jpg", ".jpeg", ".png", ".gif"}) {
    if (name.ends_with(ext))
      return true;
  }
  return false;
}

bool IsHtmlName(std::string_view name) {
  return name.ends_with(".html") || name.ends_with(".htm");
}

bool IsPlainFileName(std::string_view name) {
  return !name.empty() && name.find('/') == std::string_view::npos &&
         name != "." && name != "..";
}

}  // namespace

std::string ResponseSignature(const net::HttpResponse& response) {
  std::string material = response.StatusLine() + "\n";
  for (const auto& [name, value] : response.headers)
    material += name + "\n";
  material += "\n" + response.body;
  return codec::HexEncode(codec::Blake2b(material, 16));
}

AppServer::AppServer(World& world, std::string app_id, std::string node_id,
                     ServerConfig config, std::set<std::string> trusted_clients)
    : world_(world),
      app_id_(std::move(app_id)),
      node_(std::move(node_id)),
      config_(std::move(config)),
      trusted_(std::move(trusted_clients)) {}

void AppServer::Start(bool background_allowed) {
  net::ServiceHandlers handlers;
  handlers.on_connect = [this](net::ConnectionId conn, const net::Node& client) {
    return Admit(conn, client);
  };
  handlers.on_request = [this](net::ConnectionId conn, const net::Node& client,
                               const std::string& wire) {
    std::optional<net::HttpRequest> req = net::HttpRequest::Parse(wire);
    if (!req)
      return Reply(400).Serialize();
    return Handle(conn, client, *req).Serialize();
  };
  world_.net.Bind(node_, config_.port,
                  config_.background_capable && background_allowed,
                  config_.encrypted, std::move(handlers));
}

std::string AppServer::BaseDir() const {
  const vfs::AppZone* zone = world_.fs.FindApp(app_id_);
  if (!zone)
    throw Error(Errc::kUnknownApp, app_id_);
  return zone->base_dir;
}

int AppServer::uid() const {
  const vfs::AppZone* zone = world_.fs.FindApp(app_id_);
  if (!zone)
    throw Error(Errc::kUnknownApp, app_id_);
  return zone->uid;
}

bool AppServer::Admit(net::ConnectionId, const net::Node& client) {
  if (config_.encrypted && config_.self_signed &&
      client.kind == net::NodeKind::kDesktopBrowser) {
    world_.trace.Record({"certificate-warning", client.id, config_.name,
                         "self-signed", false, true});
  }
  switch (config_.alert) {
    case AlertPolicy::kNone:
      return true;
    case AlertPolicy::kFirstConnectionBanner:
      if (!seen_connection_) {
        world_.trace.Record(
            {"connected-banner", client.id, config_.name, "", false, true});
      }
      seen_connection_ = true;
      return true;
    case AlertPolicy::kPerConnectionConfirm: {
      bool accepted = trusted_.contains(client.id);
      world_.trace.Record({"connection-confirm", client.id, config_.name,
                           accepted ? "accepted" : "rejected", false, true});
      return accepted;
    }
  }
  return true;
}

net::HttpResponse AppServer::Reply(int status, std::string body,
                                   std::string content_type) const {
  net::HttpResponse resp;
  resp.status = status;
  resp.reason = std::string(net::ReasonPhrase(status));
  if (config_.protocol == Protocol::kFtp)
    resp.protocol = "FTP";
  if (!config_.server_header.empty())
    resp.headers["Server"] = config_.server_header;
  resp.headers["Content-Type"] = std::move(content_type);
  resp.body = std::move(body);
  return resp;
}

net::HttpResponse AppServer::Deny(int status, const std::string& reason,
                                  const net::Node& client,
                                  const std::string& target, bool record) {
  if (record)
    world_.trace.Record({reason, client.id, config_.name + target, "", true});
  net::HttpResponse resp = Reply(status, std::string(net::ReasonPhrase(status)));
  resp.headers["X-Deny-Reason"] = reason;
  return resp;
}

void AppServer::IssueSession(net::ConnectionId conn, net::HttpResponse& resp) {
  switch (config_.session) {
    case SessionModel::kCookieToken: {
      std::string sid = world_.RandomToken(16);
      session_cookies_.insert(sid);
      resp.headers["Set-Cookie"] = "sid=" + sid;
      break;
    }
    case SessionModel::kPerRequestUrlToken:
      live_token_ = world_.RandomToken(16);
      resp.headers["X-Request-Token"] = live_token_;
      break;
    case SessionModel::kNone:
      authed_connections_.insert(conn);
      break;
  }
}

std::string AppServer::Authorize(net::ConnectionId conn,
                                 const net::HttpRequest& req,
                                 net::HttpResponse& resp) {
  if (config_.session == SessionModel::kPerRequestUrlToken) {
    std::optional<std::string> token = req.QueryParam("token");
    if (live_token_.empty() || token != live_token_)
      return "token";
    // Single use: the next request needs the next token.
    live_token_ = world_.RandomToken(16);
    resp.headers["X-Request-Token"] = live_token_;
    return {};
  }
  if (config_.auth.kind == AuthPolicy::Kind::kNone)
    return {};
  if (config_.session == SessionModel::kCookieToken) {
    auto cookies = net::ParseCookieHeader(
        req.headers.contains("Cookie") ? req.headers.at("Cookie") : "");
    if (cookies.contains("sid") && session_cookies_.contains(cookies["sid"]))
      return {};
    return "auth";
  }
  return authed_connections_.contains(conn) ? "" : "auth";
}

net::HttpResponse AppServer::Login(net::ConnectionId conn,
                                   const net::Node& client,
                                   const net::HttpRequest& req) {
  auto form = net::ParseForm(req.body);
  bool ok = false;
  switch (config_.auth.kind) {
    case AuthPolicy::Kind::kNone:
      ok = true;
      break;
    case AuthPolicy::Kind::kCode:
      ok = form["code"] == config_.auth.secret;
      break;
    case AuthPolicy::Kind::kPassword:
      ok = form["password"] == config_.auth.secret;
      break;
    case AuthPolicy::Kind::kConfirmAction:
      ok = trusted_.contains(client.id);
      world_.trace.Record({"login-confirm", client.id, config_.name,
                           ok ? "accepted" : "rejected", false, true});
      break;
  }
  if (!ok)
    return Deny(401, "auth", client, "/auth", false);
  net::HttpResponse resp = Reply(200, "welcome");
  IssueSession(conn, resp);
  return resp;
}

net::HttpResponse AppServer::Handle(net::ConnectionId conn,
                                    const net::Node& client,
                                    const net::HttpRequest& req) {
  const std::string& path = req.path;
  if (path == "/") {
    net::HttpResponse resp = Reply(200, config_.index_body, "text/html");
    if (config_.protocol == Protocol::kFtp) {
      resp.status = 220;
      resp.reason = std::string(net::ReasonPhrase(220));
    }
    // Without a login step the index page hands out the first token.
    if (config_.session == SessionModel::kPerRequestUrlToken &&
        config_.auth.kind == AuthPolicy::Kind::kNone) {
      IssueSession(conn, resp);
    }
    return resp;
  }
  if (path == "/auth") {
    if (req.method != "POST")
      return Reply(405);
    return Login(conn, client, req);
  }

  bool known = path == "/list" || path == "/download" || path == "/upload" ||
               path == "/view";
  if (!known)
    return Deny(404, "not-found", client, path, false);

  net::HttpResponse resp = Reply(200);
  if (std::string reason = Authorize(conn, req, resp); !reason.empty())
    return Deny(401, reason, client, req.Target(), reason == "token");

  std::string base = BaseDir();
  if (path == "/list") {
    std::string listing;
    for (const std::string& file : world_.fs.List(base))
      listing += file.substr(base.size()) + "\n";
    resp.body = std::move(listing);
    return resp;
  }

  if (path == "/download") {
    std::string rel = req.QueryParam("path").value_or("");
    if (rel.empty() || rel.front() == '/' || !vfs::IsNormalizedPath("/" + rel))
      return Deny(400, "bad-path", client, req.Target(), false);
    try {
      resp.body = world_.fs.Read(base + rel, uid());
    } catch (const Error& e) {
      return Deny(404, "not-found", client, req.Target(), false);
    }
    resp.headers["Content-Type"] = "application/octet-stream";
    return resp;
  }

  std::string name = req.QueryParam("name").value_or("");
  if (!IsPlainFileName(name))
    return Deny(400, "bad-name", client, req.Target(), false);

  if (path == "/upload") {
    if (req.method != "POST")
      return Reply(405);
    if (config_.upload == UploadPolicy::kDisabled)
      return Deny(404, "upload-policy", client, req.Target(), true);
    if (config_.upload == UploadPolicy::kPhotosOnly && !IsPhotoName(name))
      return Deny(403, "upload-policy", client, req.Target(), true);
    world_.fs.Write(base + config_.upload_dir + name, uid(), req.body);
    world_.trace.Record({"upload", client.id, config_.name + req.Target(),
                         std::to_string(req.body.size()) + " bytes"});
    resp.body = "stored";
    return resp;
  }

  // path == "/view"
  if (!config_.view_uploads)
    return Deny(404, "view-rendering", client, req.Target(), true);
  std::string file = base + config_.upload_dir + name;
  if (!world_.fs.Exists(file))
    return Deny(404, "not-found", client, req.Target(), false);
  resp.body = world_.fs.Read(file, uid());
  if (IsPhotoName(name)) {
    resp.headers["Content-Type"] = "image/jpeg";
  } else if (IsHtmlName(name) &&
             config_.upload != UploadPolicy::kAnyRenderedAsText) {
    resp.headers["Content-Type"] = "text/html";
  } else if (IsHtmlName(name)) {
    world_.trace.Record({"view-rendering", client.id, config_.name + req.Target(),
                         "served as text/plain", true});
  }
  return resp;
}

}  // namespace ifl::server
