#include "ifl/web/browser.h"

#include "ifl/base/codec.h"
#include "ifl/net/http.h"

namespace ifl::web {

namespace {

using origin::Scheme;
using origin::Url;

// Tabs and newlines would break the line-per-record store formats.
std::string Field(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\t' || c == '\n')
      c = ' ';
  }
  return out;
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    size_t nl = text.find('\n');
    out.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos)
      break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace

Browser::Browser(World& world, std::string node_id,
                 std::optional<std::string> app_id, RenderConfig config,
                 BrowserFiles files)
    : world_(world),
      node_(std::move(node_id)),
      app_id_(std::move(app_id)),
      config_(config),
      files_(std::move(files)) {}

int Browser::uid() const {
  if (!app_id_)
    return -1;
  const vfs::AppZone* zone = world_.fs.FindApp(*app_id_);
  if (!zone)
    throw Error(Errc::kUnknownApp, *app_id_);
  return zone->uid;
}

std::string Browser::AppPath(std::string_view relative) const {
  if (!app_id_)
    return {};
  const vfs::AppZone* zone = world_.fs.FindApp(*app_id_);
  if (!zone)
    throw Error(Errc::kUnknownApp, *app_id_);
  return zone->base_dir + std::string(relative);
}

std::string Browser::StorePath(Store store) const {
  return AppPath(store == Store::kHistory ? files_.history : files_.bookmarks);
}

std::string Browser::CookiePath() const {
  return AppPath(files_.cookies);
}

std::vector<Cookie> Browser::Cookies() const {
  if (!app_id_)
    return memory_jar_;
  std::string path = CookiePath();
  if (!world_.fs.Exists(path))
    return {};
  std::vector<Cookie> jar;
  std::string content = world_.fs.Read(path, uid());
  for (std::string_view line : SplitLines(content)) {
    size_t a = line.find('\t');
    size_t b = a == std::string_view::npos ? a : line.find('\t', a + 1);
    if (b == std::string_view::npos)
      continue;
    jar.push_back({std::string(line.substr(0, a)),
                   std::string(line.substr(a + 1, b - a - 1)),
                   std::string(line.substr(b + 1))});
  }
  return jar;
}

void Browser::SetCookie(const Cookie& cookie) {
  Cookie clean{Field(cookie.host), Field(cookie.name), Field(cookie.value)};
  std::vector<Cookie> jar = Cookies();
  bool replaced = false;
  for (Cookie& c : jar) {
    if (c.host == clean.host && c.name == clean.name) {
      c.value = clean.value;
      replaced = true;
    }
  }
  if (!replaced)
    jar.push_back(clean);
  if (!app_id_) {
    memory_jar_ = std::move(jar);
    return;
  }
  std::string serialized;
  for (const Cookie& c : jar)
    serialized += c.host + "\t" + c.name + "\t" + c.value + "\n";
  world_.fs.Write(CookiePath(), uid(), serialized);
}

void Browser::RecordFailure(const Error& error, const std::string& url) {
  world_.trace.Record({std::string(ErrcName(error.code())), node_, url,
                       error.what(), true});
}

std::optional<Browser::Resource> Browser::Fetch(const Url& url,
                                                const origin::Origin* initiator,
                                                const std::string& method,
                                                const std::string& body) {
  switch (url.scheme) {
    case Scheme::kFile:
      if (!app_id_)
        throw Error(Errc::kNotPermitted, node_ + " has no local files");
      return Resource{world_.fs.Read(url.path, uid()), "text/html"};
    case Scheme::kContent:
      return Resource{LoadContentUri(url).body, "text/html"};
    case Scheme::kIntent:
      throw Error(Errc::kNotPermitted, "intent URLs are not fetchable");
    default:
      break;
  }

  origin::Origin target = origin::OriginOf(url, config_.sop);
  std::string origin_key = target.Serialize();
  net::HttpRequest req;
  req.method = method;
  req.path = url.path;
  req.query = url.query;
  req.body = body;
  req.headers["Host"] = url.host;
  // The token travels in page URLs, so only same-origin requests carry it.
  bool same_origin = !initiator || *initiator == target;
  if (auto it = url_tokens_.find(origin_key);
      same_origin && it != url_tokens_.end()) {
    req.query += (req.query.empty() ? "token=" : "&token=") + it->second;
  }
  std::string cookie_header;
  for (const Cookie& c : Cookies()) {
    if (c.host == url.host)
      cookie_header += (cookie_header.empty() ? "" : "; ") + c.name + "=" + c.value;
  }
  if (!cookie_header.empty())
    req.headers["Cookie"] = cookie_header;

  net::Connection conn =
      world_.net.Connect(node_, url.host, *url.EffectivePort());
  std::string wire = world_.net.Request(conn.id, req.Serialize());
  std::optional<net::HttpResponse> resp = net::HttpResponse::Parse(wire);
  if (!resp)
    throw Error(Errc::kUnreachable, "garbled response from " + url.host);

  if (auto set = resp->Header("Set-Cookie")) {
    size_t eq = set->find('=');
    if (eq != std::string::npos)
      SetCookie({url.host, set->substr(0, eq), set->substr(eq + 1)});
  }
  if (auto token = resp->Header("X-Request-Token"))
    url_tokens_[origin_key] = *token;
  world_.trace.Record({"fetch", node_, method + " " + url.Spec(),
                       std::to_string(resp->status)});
  if (resp->status >= 400) {
    world_.trace.Record({"http-" + std::to_string(resp->status), node_,
                         url.Spec(), resp->Header("X-Deny-Reason").value_or(""),
                         true});
    return std::nullopt;
  }
  return Resource{std::move(resp->body),
                  resp->Header("Content-Type").value_or("text/html")};
}

std::optional<Document> Browser::LoadDocument(const Url& url,
                                              const origin::Origin* initiator) {
  std::optional<Document> doc;
  if (url.scheme == Scheme::kContent) {
    doc = LoadContentUri(url);
  } else {
    std::optional<Resource> res = Fetch(url, initiator, "GET", "");
    if (!res)
      return std::nullopt;
    doc = ParseDocument(url, std::move(res->body), config_.sop,
                        std::move(res->content_type));
    world_.trace.Record({"load", node_, url.Spec(), doc->origin.Serialize()});
  }
  return doc;
}

Document Browser::LoadContentUri(const Url& uri) {
  if (!config_.content_provider_exposed)
    throw Error(Errc::kProviderUnavailable, uri.host + " is not exported");
  if (!config_.provider_implements_openfile)
    throw Error(Errc::kProviderUnavailable, uri.host + " lacks openFile");
  const vfs::AppZone* provider = world_.fs.FindApp(uri.host);
  if (!provider)
    throw Error(Errc::kProviderUnavailable, "no provider " + uri.host);
  std::string body =
      world_.fs.Read(provider->base_dir + uri.path.substr(1), provider->uid);
  Document doc = ParseDocument(uri, std::move(body), config_.sop);
  world_.trace.Record({"load", node_, uri.Spec(), doc.origin.Serialize()});
  return doc;
}

bool Browser::ScriptsAllowed(const Document& doc) const {
  if (!config_.js_enabled)
    return false;
  return !origin::IsLocalScheme(doc.url.scheme) || config_.js_local_enabled;
}

void Browser::Render(const Document& doc, int depth, RenderResult& result) {
  if (!doc.scripts.empty()) {
    if (ScriptsAllowed(doc)) {
      for (const Script& script : doc.scripts)
        RunScript(doc, script, depth, result);
    } else {
      world_.trace.Record({"script-suppressed", node_, doc.url.Spec(),
                           std::to_string(doc.scripts.size()) + " scripts",
                           true});
    }
  }
  for (const Url& frame : doc.frames)
    LoadFrame(doc, frame, depth + 1, result);
}

std::optional<Document> Browser::LoadFrame(const Document& parent,
                                           const Url& url, int depth,
                                           RenderResult& result) {
  if (depth > kMaxFrameDepth) {
    world_.trace.Record({"frame-depth-exceeded", node_, url.Spec(), ""});
    return std::nullopt;
  }
  if (url.scheme == Scheme::kIntent) {
    world_.trace.Record({"frame-ignored", node_, url.Spec(), "intent"});
    return std::nullopt;
  }
  if (url.scheme == Scheme::kFile && origin::IsWebScheme(parent.url.scheme) &&
      !config_.local_frames_from_web) {
    world_.trace.Record(
        {"local-frame-blocked", node_, url.Spec(), parent.origin.Serialize(), true});
    return std::nullopt;
  }
  std::optional<Document> doc;
  try {
    doc = LoadDocument(url, &parent.origin);
  } catch (const Error& e) {
    RecordFailure(e, url.Spec());
    return std::nullopt;
  }
  if (doc)
    Render(*doc, depth, result);
  return doc;
}

void Browser::RunScript(const Document& doc, const Script& script, int depth,
                        RenderResult& result) {
  world_.trace.Record(
      {"script-run", node_, doc.url.Spec(), FormatActions(script.actions)});
  std::vector<std::string> accumulator;
  for (const Action& action : script.actions) {
    switch (action.kind) {
      case Action::Kind::kReadBody:
        accumulator.push_back(doc.body);
        break;
      case Action::Kind::kFrame: {
        Url target;
        try {
          target = origin::ResolveUrl(doc.url, action.target);
        } catch (const Error& e) {
          RecordFailure(e, action.target);
          break;
        }
        std::optional<Document> frame = LoadFrame(doc, target, depth + 1, result);
        if (!frame)
          break;
        origin::Decision d = origin::MayAccess(doc.origin, target, config_.sop);
        world_.trace.Record({d.allowed ? "sop-check" : "sop-denied", node_,
                             target.Spec(), d.ToString(), !d.allowed});
        if (d.allowed)
          accumulator.push_back(frame->body);
        break;
      }
      case Action::Kind::kExfil:
        for (std::string& chunk : accumulator) {
          try {
            world_.net.Post(node_, action.target, chunk);
          } catch (const Error& e) {
            RecordFailure(e, action.target);
            continue;
          }
          world_.trace.Record({"exfil", node_, action.target,
                               std::to_string(chunk.size()) + " bytes"});
          result.exfiltrated.push_back({action.target, std::move(chunk)});
        }
        accumulator.clear();
        break;
      case Action::Kind::kSetCookie:
        if (origin::IsWebScheme(doc.url.scheme) && action.target == doc.url.host) {
          SetCookie({action.target, action.name, action.value});
          world_.trace.Record({"set-cookie", node_, action.target, action.name});
        } else {
          world_.trace.Record(
              {"set-cookie-ignored", node_, action.target, doc.url.host});
        }
        break;
      case Action::Kind::kPost:
        try {
          Url target = origin::ResolveUrl(doc.url, action.target);
          Fetch(target, &doc.origin, "POST", action.value);
        } catch (const Error& e) {
          RecordFailure(e, action.target);
        }
        break;
    }
  }
}

void Browser::FollowLink(const Link& link, UserAction action,
                         RenderResult& result) {
  const Url& url = link.url;
  if (action == UserAction::kLongPress) {
    if (!config_.long_press_dialog) {
      world_.trace.Record({"link-not-clickable", node_, url.Spec(), "long-press", true});
      return;
    }
    world_.trace.Record({"long-press-dialog", node_, url.Spec(), "open", false, true});
  } else if (url.scheme == Scheme::kFile && !config_.file_links_clickable) {
    world_.trace.Record({"link-not-clickable", node_, url.Spec(), "click", true});
    return;
  }
  try {
    RenderResult sub = Open(url);
    for (Exfiltration& e : sub.exfiltrated)
      result.exfiltrated.push_back(std::move(e));
  } catch (const Error& e) {
    RecordFailure(e, url.Spec());
  }
}

RenderResult Browser::Navigate(std::string_view url, Interaction interaction) {
  return Open(origin::ParseUrl(url), interaction);
}

std::optional<std::string> Browser::Submit(std::string_view url,
                                           const std::string& body) {
  std::optional<Resource> res = Fetch(origin::ParseUrl(url), nullptr, "POST", body);
  if (!res)
    return std::nullopt;
  return res->body;
}

RenderResult Browser::Open(const Url& url, Interaction interaction) {
  if (url.scheme == Scheme::kIntent)
    return HandleIntentUri(url);
  RenderResult result;
  std::optional<Document> doc = LoadDocument(url, nullptr);
  if (!doc)
    return result;
  if (origin::IsWebScheme(url.scheme))
    AppendHistory(*doc);
  current_ = doc;
  Render(*doc, 0, result);
  if (interaction.action != UserAction::kNone) {
    if (interaction.link >= doc->links.size()) {
      throw Error(Errc::kNotFound,
                  "no link #" + std::to_string(interaction.link) + " on " +
                      url.Spec());
    }
    FollowLink(doc->links[interaction.link], interaction.action, result);
  }
  result.document = std::move(doc);
  return result;
}

RenderResult Browser::HandleIntentUri(const Url& uri) {
  std::string_view payload = uri.query;
  if (!payload.starts_with("Intent;") || !payload.ends_with(";end"))
    throw Error(Errc::kMalformedUrl, "bad intent payload: " + uri.query);
  payload = payload.substr(7, payload.size() - 11);
  std::string component;
  std::optional<std::string> extra_url;
  while (!payload.empty()) {
    size_t semi = payload.find(';');
    std::string_view field = payload.substr(0, semi);
    if (field.starts_with("component="))
      component = std::string(field.substr(10));
    else if (field.starts_with("S.url="))
      extra_url = codec::PercentDecode(field.substr(6));
    if (semi == std::string_view::npos)
      break;
    payload.remove_prefix(semi + 1);
  }
  world_.trace.Record({"intent", node_, uri.Spec(), component});

  RenderResult result;
  auto refuse = [&](const char* stage) {
    world_.trace.Record({stage, node_, uri.Spec(), component, true});
    return result;
  };
  if (!config_.intent_parse_uri)
    return refuse("intent-not-parsed");
  size_t slash = component.find('/');
  if (slash == std::string::npos || !app_id_ ||
      component.substr(0, slash) != *app_id_) {
    throw Error(Errc::kNotFound, "no component " + component);
  }
  if (!config_.intent_component_loads_external_url || !extra_url)
    return refuse("intent-no-external-url");
  Url target = origin::ParseUrl(*extra_url);
  if (origin::IsLocalScheme(target.scheme) &&
      !config_.intent_component_allows_file_js) {
    return refuse("intent-file-js-disallowed");
  }
  return Open(target);
}

RenderResult Browser::RenderStoreUi(Store store) {
  RenderResult result;
  std::string path = StorePath(store);
  const char* label = store == Store::kHistory ? "history" : "bookmarks";
  if (path.empty() || !world_.fs.Exists(path)) {
    world_.trace.Record({"store-ui", node_, path, std::string(label) + " empty"});
    return result;
  }
  Url url = origin::ParseUrl("file://" + path);
  Document doc = ParseDocument(url, world_.fs.Read(path, uid()), config_.sop);
  world_.trace.Record({"store-ui", node_, url.Spec(), label});
  current_ = doc;
  Render(doc, 0, result);
  result.document = std::move(doc);
  return result;
}

void Browser::Bookmark() {
  if (!current_ || !app_id_)
    throw Error(Errc::kNotFound, node_ + " has no page to bookmark");
  world_.fs.Append(StorePath(Store::kBookmarks), uid(),
                   Field(current_->title) + "\t" + current_->url.Spec() + "\n");
  world_.trace.Record({"bookmark", node_, current_->url.Spec(), ""});
}

void Browser::AppendHistory(const Document& doc) {
  if (!app_id_)
    return;
  world_.fs.Append(StorePath(Store::kHistory), uid(),
                   Field(doc.title) + "\t" + doc.url.Spec() + "\n");
}

}  // namespace ifl::web
