#ifndef IFL_WEB_BROWSER_H_
#define IFL_WEB_BROWSER_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifl/base/error.h"
#include "ifl/origin/sop.h"
#include "ifl/origin/url.h"
#include "ifl/web/document.h"
#include "ifl/world/world.h"

namespace ifl::web {

inline constexpr int kMaxFrameDepth = 8;

struct RenderConfig {
  origin::SopPolicy sop;
  bool js_enabled = true;
  // False is the NoJS mitigation: no script runs in file:// or content://.
  bool js_local_enabled = true;
  bool file_links_clickable = false;
  bool long_press_dialog = false;
  // Whether an http(s) document may embed a file:// iframe at all.
  bool local_frames_from_web = false;
  bool content_provider_exposed = false;
  bool provider_implements_openfile = false;
  // The three intent:// preconditions, checked in this order.
  bool intent_parse_uri = false;
  bool intent_component_loads_external_url = false;
  bool intent_component_allows_file_js = false;
};

// Browser state files, relative to the app's base_dir.
struct BrowserFiles {
  std::string cookies = "app_webview/cookies.db";
  std::string history = "databases/history.db";
  std::string bookmarks = "databases/bookmarks.db";
};

enum class UserAction { kNone, kClick, kLongPress };

struct Interaction {
  UserAction action = UserAction::kNone;
  // Index into the top-level document's links.
  size_t link = 0;
};

struct Exfiltration {
  std::string sink;
  std::string bytes;
};

struct RenderResult {
  std::vector<Exfiltration> exfiltrated;
  std::optional<Document> document;
};

struct Cookie {
  std::string host;
  std::string name;
  std::string value;

  bool operator==(const Cookie&) const = default;
};

enum class Store { kHistory, kBookmarks };

// A rendering engine bound to one network node. A device browser belongs to
// an installed app: it reads files with that app's uid and keeps its cookie
// jar, history and bookmarks as files in the app's zone. A desktop browser
// (no app) keeps its jar in memory and cannot open local files.
//
// Sub-resource failures (frames, links, intents, exfiltration) are recorded
// as blocking trace events. Failures of the top-level load throw Error.
class Browser {
 public:
  Browser(World& world, std::string node_id, std::optional<std::string> app_id,
          RenderConfig config, BrowserFiles files = {});

  RenderResult Navigate(std::string_view url, Interaction interaction = {});
  RenderResult Open(const origin::Url& url, Interaction interaction = {});
  // Top-level form POST such as a login. Returns the response body, or
  // nullopt when the server answered with an error status.
  std::optional<std::string> Submit(std::string_view url,
                                    const std::string& body);

  // Renders the history or bookmarks file as a local document in the
  // file:// origin of that file.
  RenderResult RenderStoreUi(Store store);
  // Appends the current top-level document to the bookmarks file.
  void Bookmark();

  // content://<app_id>/<relpath> -> <base_dir><relpath>, read by the
  // provider app. Throws Error(kProviderUnavailable) unless the provider is
  // exposed and implements openFile.
  Document LoadContentUri(const origin::Url& uri);
  // Payload: "Intent;component=<pkg>/<cls>;S.url=<escaped url>;end".
  RenderResult HandleIntentUri(const origin::Url& uri);

  std::vector<Cookie> Cookies() const;
  void SetCookie(const Cookie& cookie);

  // Absolute path of a state file; empty for a desktop browser.
  std::string StorePath(Store store) const;
  std::string CookiePath() const;

  const std::string& node_id() const { return node_; }
  const RenderConfig& config() const { return config_; }
  const std::optional<Document>& current() const { return current_; }

 private:
  struct Resource {
    std::string body;
    std::string content_type;
  };

  std::optional<Resource> Fetch(const origin::Url& url,
                                const origin::Origin* initiator,
                                const std::string& method,
                                const std::string& body);
  std::optional<Document> LoadDocument(const origin::Url& url,
                                       const origin::Origin* initiator);
  std::optional<Document> LoadFrame(const Document& parent,
                                    const origin::Url& url, int depth,
                                    RenderResult& result);
  void Render(const Document& doc, int depth, RenderResult& result);
  void RunScript(const Document& doc, const Script& script, int depth,
                 RenderResult& result);
  void FollowLink(const Link& link, UserAction action, RenderResult& result);
  bool ScriptsAllowed(const Document& doc) const;
  void AppendHistory(const Document& doc);
  void RecordFailure(const Error& error, const std::string& url);
  int uid() const;
  std::string AppPath(std::string_view relative) const;

  World& world_;
  std::string node_;
  std::optional<std::string> app_id_;
  RenderConfig config_;
  BrowserFiles files_;
  std::vector<Cookie> memory_jar_;
  // Latest per-request URL token per serialized origin.
  std::map<std::string, std::string> url_tokens_;
  std::optional<Document> current_;
};

}  // namespace ifl::web

#endif  // IFL_WEB_BROWSER_H_
