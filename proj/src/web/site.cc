#include "ifl/web/site.h"

#include "ifl/net/http.h"

namespace ifl::web {

StaticSite::StaticSite(World& world, std::string node_id, int port)
    : world_(world),
      node_(std::move(node_id)),
      port_(port),
      pages_(std::make_shared<std::map<std::string, Page>>()) {}

void StaticSite::Put(const std::string& path, std::string body,
                     std::string content_type) {
  (*pages_)[path] = Page{std::move(body), std::move(content_type)};
}

void StaticSite::Serve() {
  net::ServiceHandlers handlers;
  handlers.on_request = [pages = pages_](net::ConnectionId, const net::Node&,
                                         const std::string& wire) {
    net::HttpResponse resp;
    std::optional<net::HttpRequest> req = net::HttpRequest::Parse(wire);
    auto it = req ? pages->find(req->path) : pages->end();
    if (it == pages->end()) {
      resp.status = 404;
      resp.reason = std::string(net::ReasonPhrase(404));
      return resp.Serialize();
    }
    resp.headers["Content-Type"] = it->second.content_type;
    resp.body = it->second.body;
    return resp.Serialize();
  };
  world_.net.Bind(node_, port_, /*background_capable=*/true,
                  /*encrypted=*/false, std::move(handlers));
}

std::string StaticSite::UrlFor(const std::string& path) const {
  const net::Node& node = world_.net.node(node_);
  std::string url = "http://" + node.host;
  if (port_ != 80)
    url += ":" + std::to_string(port_);
  return url + path;
}

}  // namespace ifl::web
