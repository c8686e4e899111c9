#ifndef IFL_SERVER_ATTACKS_H_
#define IFL_SERVER_ATTACKS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifl/net/http.h"
#include "ifl/net/network.h"
#include "ifl/web/browser.h"
#include "ifl/web/site.h"
#include "ifl/world/world.h"

namespace ifl::server {

// Scripted HTTP client on one connection. Remembers the session cookie and
// the latest per-request URL token, as a real client page would.
class HttpSession {
 public:
  // Connects immediately; errors are those of Network::Connect.
  HttpSession(World& world, std::string actor, std::string host, int port);

  net::HttpResponse Send(const std::string& method, const std::string& path,
                         const std::string& query = {},
                         const std::string& body = {});
  void set_cookie(std::string sid) { cookie_ = std::move(sid); }

 private:
  World& world_;
  std::string actor_;
  std::string host_;
  net::Connection conn_;
  std::optional<std::string> cookie_;
  std::optional<std::string> token_;
};

// Throws the Error matching a refusal status: 401 kAuthFailed, 403
// kNotPermitted, 404 kNotFound, 400 kInvalidPath.
void RequireOk(const net::HttpResponse& response, const std::string& what);

// GET /download?path=|relative| on |session|. Adds the bytes to the loot.
std::string Download(World& world, HttpSession& session,
                     const std::string& relative);

// Unauthenticated client: loads "/" (picking up any token) then downloads.
std::string DirectDownload(World& world, const std::string& actor,
                           const std::string& host, int port,
                           const std::string& relative);

struct BruteForceResult {
  std::string code;
  uint64_t attempts = 0;
};

// POSTs every code of |length| over |charset| in ascending order until one
// is accepted. |session| is authenticated afterwards.
// Throws Error(kAuthFailed) when the space is exhausted.
BruteForceResult BruteForce(World& world, HttpSession& session, int length,
                            const std::string& charset);

// Replays the first credential an Intranet sniffer captured towards
// |host|:|port| (auth secret, then session cookie, then URL token) and
// downloads |relative|. Throws Error(kAuthFailed) when nothing usable was
// captured.
std::string SniffReplay(World& world, const std::string& sniffer,
                        const std::string& host, int port,
                        const std::string& relative);

// File-upload CSRF: the victim's browser opens an adversary page that POSTs
// a scripted HTML file to the server, then the victim views that file on
// the server. Returns what the planted script exfiltrated to |sink_host|.
std::vector<web::Exfiltration> CsrfUploadAttack(
    World& world, web::StaticSite& adversary_site, const std::string& sink_host,
    web::Browser& victim, const std::string& host, int port,
    const std::string& relative, const std::string& file_name = "photos.html");

struct FingerprintEntry {
  std::string id;
  std::string name;
  int port = 0;
  std::string signature;
};

// Signatures of every built-in preset's "/" response.
const std::vector<FingerprintEntry>& FingerprintDatabase();

struct Guess {
  std::string id;
  std::string name;
  int port = 0;
  // False when only the port matched.
  bool signature_match = false;
};

// Scans |host|, fetches "/" from every open port known to the database and
// ranks candidates: signature matches first, then port-only matches.
// Throws Error(kNoMatch) when nothing matches.
std::vector<Guess> FingerprintProbe(World& world, const std::string& actor,
                                    const std::string& host);

}  // namespace ifl::server

#endif  // IFL_SERVER_ATTACKS_H_
