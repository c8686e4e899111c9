#ifndef IFL_SERVER_APP_SERVER_H_
#define IFL_SERVER_APP_SERVER_H_

#include <set>
#include <string>

#include "ifl/net/http.h"
#include "ifl/net/network.h"
#include "ifl/server/presets.h"
#include "ifl/world/world.h"

namespace ifl::server {

// Stable hash of an unauthenticated "/" response: status line, sorted header
// names and body. 32 hex characters.
std::string ResponseSignature(const net::HttpResponse& response);

// Embedded file server of one installed app. Endpoints:
//   GET  /                 index page (unauthenticated)
//   POST /auth             body code=... or password=...; issues a session
//   GET  /list             file names under the app's base_dir
//   GET  /download?path=   file bytes, path relative to base_dir
//   POST /upload?name=     stores the body under upload_dir
//   GET  /view?name=       serves an uploaded file for rendering
// Refusals carry "X-Deny-Reason". Policy refusals (token, upload-policy,
// view-rendering) are also recorded as blocking trace events.
class AppServer {
 public:
  AppServer(World& world, std::string app_id, std::string node_id,
            ServerConfig config, std::set<std::string> trusted_clients = {});

  // Binds config().port on the app's device. Effective background support is
  // the preset's flag and |background_allowed|.
  void Start(bool background_allowed = true);

  // Connection admission under the alert policy.
  bool Admit(net::ConnectionId conn, const net::Node& client);
  net::HttpResponse Handle(net::ConnectionId conn, const net::Node& client,
                           const net::HttpRequest& request);

  const ServerConfig& config() const { return config_; }
  const std::string& app_id() const { return app_id_; }
  const std::string& node_id() const { return node_; }

 private:
  net::HttpResponse Reply(int status, std::string body = {},
                          std::string content_type = "text/plain") const;
  net::HttpResponse Deny(int status, const std::string& reason,
                         const net::Node& client, const std::string& target,
                         bool record);
  net::HttpResponse Login(net::ConnectionId conn, const net::Node& client,
                          const net::HttpRequest& request);
  void IssueSession(net::ConnectionId conn, net::HttpResponse& response);
  // Empty string when authorised, else the deny reason.
  std::string Authorize(net::ConnectionId conn, const net::HttpRequest& request,
                        net::HttpResponse& response);
  std::string BaseDir() const;
  int uid() const;

  World& world_;
  std::string app_id_;
  std::string node_;
  ServerConfig config_;
  std::set<std::string> trusted_;
  std::set<std::string> session_cookies_;
  std::set<net::ConnectionId> authed_connections_;
  std::string live_token_;
  bool seen_connection_ = false;
};

}  // namespace ifl::server

#endif  // IFL_SERVER_APP_SERVER_H_
