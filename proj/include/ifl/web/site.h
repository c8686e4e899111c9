#ifndef IFL_WEB_SITE_H_
#define IFL_WEB_SITE_H_

#include <map>
#include <memory>
#include <string>

#include "ifl/world/world.h"

namespace ifl::web {

// Static pages served over HTTP from a host node, e.g. the adversary's
// web server. Pages may be added after Serve().
class StaticSite {
 public:
  StaticSite(World& world, std::string node_id, int port = 80);

  void Put(const std::string& path, std::string body,
           std::string content_type = "text/html");
  void Serve();

  std::string UrlFor(const std::string& path) const;

 private:
  struct Page {
    std::string body;
    std::string content_type;
  };

  World& world_;
  std::string node_;
  int port_;
  std::shared_ptr<std::map<std::string, Page>> pages_;
};

}  // namespace ifl::web

#endif  // IFL_WEB_SITE_H_
