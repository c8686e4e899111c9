#include "ifl/harness/scenario.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ifl/base/error.h"
#include "ifl/catalog_data.h"

namespace ifl::harness {

using nlohmann::json;

namespace {

[[noreturn]] void Invalid(const std::string& where, const std::string& why) {
  throw Error(Errc::kScenarioInvalid, where + ": " + why);
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void CheckKeys(const json& j, const std::string& path,
               std::initializer_list<std::string_view> allowed) {
  if (!j.is_object())
    Invalid(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      Invalid(Join(path, key), "unknown field");
  }
}

template <typename T>
T Get(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key))
    Invalid(Join(path, key), "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    Invalid(Join(path, key), "wrong type");
  }
}

template <typename T>
T GetOr(const json& j, const std::string& path, const std::string& key,
        T fallback) {
  return j.contains(key) ? Get<T>(j, path, key) : fallback;
}

std::map<std::string, std::string> GetFiles(const json& j,
                                            const std::string& path,
                                            const std::string& key) {
  if (!j.contains(key))
    return {};
  const json& files = j.at(key);
  if (!files.is_object())
    Invalid(Join(path, key), "expected an object of strings");
  std::map<std::string, std::string> out;
  for (const auto& [name, value] : files.items()) {
    if (!value.is_string())
      Invalid(Join(path, key) + "." + name, "expected a string");
    out[name] = value.get<std::string>();
  }
  return out;
}

bool IsRelative(std::string_view p) {
  return !p.empty() && p.front() != '/' && vfs::IsNormalizedPath("/" + std::string(p));
}

web::RenderConfig ParseBrowser(const json& j, const std::string& path,
                               web::BrowserFiles& files) {
  CheckKeys(j, path,
            {"sop", "js_enabled", "js_local_enabled", "file_links_clickable",
             "long_press_dialog", "local_frames_from_web",
             "content_provider_exposed", "provider_implements_openfile",
             "intent_parse_uri", "intent_component_loads_external_url",
             "intent_component_allows_file_js", "files"});
  web::RenderConfig c;
  if (j.contains("sop")) {
    const json& sop = j.at("sop");
    std::string sp = Join(path, "sop");
    CheckKeys(sop, sp, {"mode", "allow_file_from_file", "cross_scheme_http_to_file"});
    std::string mode = GetOr<std::string>(sop, sp, "mode", "legacy");
    std::optional<origin::SopMode> parsed = origin::ParseSopMode(mode);
    if (!parsed)
      Invalid(Join(sp, "mode"), "unknown mode '" + mode + "'");
    c.sop.mode = *parsed;
    c.sop.allow_file_from_file = GetOr(sop, sp, "allow_file_from_file", false);
    c.sop.cross_scheme_http_to_file =
        GetOr(sop, sp, "cross_scheme_http_to_file", false);
  }
  c.js_enabled = GetOr(j, path, "js_enabled", c.js_enabled);
  c.js_local_enabled = GetOr(j, path, "js_local_enabled", c.js_local_enabled);
  c.file_links_clickable = GetOr(j, path, "file_links_clickable", false);
  c.long_press_dialog = GetOr(j, path, "long_press_dialog", false);
  c.local_frames_from_web = GetOr(j, path, "local_frames_from_web", false);
  c.content_provider_exposed = GetOr(j, path, "content_provider_exposed", false);
  c.provider_implements_openfile =
      GetOr(j, path, "provider_implements_openfile", false);
  c.intent_parse_uri = GetOr(j, path, "intent_parse_uri", false);
  c.intent_component_loads_external_url =
      GetOr(j, path, "intent_component_loads_external_url", false);
  c.intent_component_allows_file_js =
      GetOr(j, path, "intent_component_allows_file_js", false);
  if (j.contains("files")) {
    const json& f = j.at("files");
    std::string fp = Join(path, "files");
    CheckKeys(f, fp, {"cookies", "history", "bookmarks"});
    files.cookies = GetOr(f, fp, "cookies", files.cookies);
    files.history = GetOr(f, fp, "history", files.history);
    files.bookmarks = GetOr(f, fp, "bookmarks", files.bookmarks);
  }
  return c;
}

cmd::InterpreterConfig ParseInterpreter(const json& j, const std::string& path) {
  CheckKeys(j, path,
            {"components", "tries_root", "ssh", "ssh_port",
             "ssh_background_capable", "history_file"});
  cmd::InterpreterConfig c;
  if (j.contains("components")) {
    const json& list = j.at("components");
    if (!list.is_array())
      Invalid(Join(path, "components"), "expected an array");
    for (size_t i = 0; i < list.size(); ++i) {
      std::string cp = Join(path, "components") + "[" + std::to_string(i) + "]";
      CheckKeys(list[i], cp, {"name", "exported", "required_permission"});
      cmd::ComponentDecl decl;
      decl.name = Get<std::string>(list[i], cp, "name");
      decl.exported = GetOr(list[i], cp, "exported", true);
      if (list[i].contains("required_permission"))
        decl.required_permission =
            Get<std::string>(list[i], cp, "required_permission");
      c.components.push_back(std::move(decl));
    }
  }
  c.tries_root = GetOr(j, path, "tries_root", false);
  if (j.contains("ssh")) {
    const json& s = j.at("ssh");
    std::string sp = Join(path, "ssh");
    CheckKeys(s, sp, {"password", "identity", "banner_reveals_identity"});
    cmd::ShellAuth auth;
    auth.password = GetOr(s, sp, "password", auth.password);
    auth.identity = GetOr(s, sp, "identity", auth.identity);
    auth.banner_reveals_identity =
        GetOr(s, sp, "banner_reveals_identity", auth.banner_reveals_identity);
    c.ssh = auth;
  }
  c.ssh_port = GetOr(j, path, "ssh_port", c.ssh_port);
  c.ssh_background_capable =
      GetOr(j, path, "ssh_background_capable", c.ssh_background_capable);
  c.history_file = GetOr(j, path, "history_file", c.history_file);
  if (!IsRelative(c.history_file))
    Invalid(Join(path, "history_file"), "expected a relative path");
  return c;
}

server::ServerConfig ParseServer(const json& j, const std::string& path) {
  if (!j.is_object())
    Invalid(path, "expected an object");
  server::ServerConfig c;
  if (j.contains("preset")) {
    std::string id = Get<std::string>(j, path, "preset");
    const server::ServerConfig* preset = server::FindPreset(id);
    if (!preset)
      Invalid(Join(path, "preset"), "unknown preset '" + id + "'");
    c = *preset;
  }
  json rest = j;
  rest.erase("preset");
  try {
    server::ApplyServerFields(rest, c);
  } catch (const Error& e) {
    // "server.<field>: why" -> "<path>.<field>: why"
    std::string what = e.what();
    if (what.starts_with("server."))
      what = what.substr(7);
    Invalid(path, what);
  }
  return c;
}

// Allowed argument keys per step op; the first |required| are mandatory.
struct OpShape {
  std::string_view op;
  std::vector<std::string_view> keys;
  size_t required;
};

const std::vector<OpShape>& OpShapes() {
  static const std::vector<OpShape> shapes = {
      {"deliver", {"vector", "to", "file_name", "content", "url"}, 2},
      {"open", {"app", "url", "action", "link"}, 1},
      {"bookmark", {"app"}, 1},
      {"open_store_ui", {"app", "store"}, 2},
      {"invoke_component", {"app", "component", "argv"}, 3},
      {"adversary_read", {"path"}, 1},
      {"ssh", {"app", "commands", "user", "password"}, 2},
      {"ssh_banner", {"app"}, 1},
      {"scan", {"host"}, 0},
      {"fingerprint", {"host"}, 0},
      {"legit_session", {"client", "app", "download"}, 2},
      {"download", {"app", "path"}, 2},
      {"brute_force", {"app", "path"}, 2},
      {"sniff_replay", {"app", "path"}, 2},
      {"csrf_upload", {"app", "victim", "path", "file_name"}, 3},
      {"set_screen", {"state", "app"}, 1},
  };
  return shapes;
}

const std::set<std::string_view>& AppStepKeys() {
  static const std::set<std::string_view> keys = {"app", "to"};
  return keys;
}

bool IsCell(std::string_view cell) {
  return (cell.starts_with("leak(") || cell.starts_with("blocked(")) &&
         cell.ends_with(")");
}

std::optional<net::ScreenState> ParseScreen(const json& j,
                                            const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "off_locked")
    return net::ScreenState::OffLocked();
  if (j.is_object()) {
    CheckKeys(j, path, {"foreground"});
    return net::ScreenState::Foreground(Get<std::string>(j, path, "foreground"));
  }
  Invalid(path, "expected \"off_locked\" or {\"foreground\": app}");
}

}  // namespace

const PlatformProfile& AndroidLike() {
  static const PlatformProfile p{"android_like", net::FileOpening::kDedicatedApp,
                                 false, true, true};
  return p;
}

const PlatformProfile& IosLike() {
  static const PlatformProfile p{"ios_like", net::FileOpening::kInApp, true,
                                 false, false};
  return p;
}

const PlatformProfile& ProfileByName(std::string_view name) {
  if (name == AndroidLike().name)
    return AndroidLike();
  if (name == IosLike().name)
    return IosLike();
  Invalid("profile", "unknown profile '" + std::string(name) + "'");
}

std::string_view AdversaryKindName(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::kLocal:
      return "local";
    case AdversaryKind::kIntranet:
      return "intranet";
    case AdversaryKind::kInternet:
      return "internet";
  }
  return "";
}

bool Scenario::HasTag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

const AppSpec* Scenario::FindApp(std::string_view id) const {
  for (const AppSpec& app : apps) {
    if (app.id == id)
      return &app;
  }
  return nullptr;
}

AppSpec* Scenario::FindApp(std::string_view id) {
  for (AppSpec& app : apps) {
    if (app.id == id)
      return &app;
  }
  return nullptr;
}

Scenario ParseScenario(const json& doc) {
  CheckKeys(doc, "",
            {"name", "tags", "note", "profile", "seed", "rooted", "apps",
             "public_files", "hosts", "adversary", "screen", "trusted_clients",
             "targets", "steps", "expected", "family"});
  Scenario s;
  s.name = Get<std::string>(doc, "", "name");
  if (s.name.empty())
    Invalid("name", "empty");
  s.tags = GetOr<std::vector<std::string>>(doc, "", "tags", {});
  s.note = GetOr<std::string>(doc, "", "note", "");
  s.profile = ProfileByName(GetOr<std::string>(doc, "", "profile", "android_like"));
  if (doc.contains("seed"))
    s.seed = Get<uint64_t>(doc, "", "seed");
  s.rooted = GetOr(doc, "", "rooted", false);

  std::set<std::string> nodes;
  if (doc.contains("apps")) {
    const json& apps = doc.at("apps");
    if (!apps.is_array())
      Invalid("apps", "expected an array");
    for (size_t i = 0; i < apps.size(); ++i) {
      std::string ap = "apps[" + std::to_string(i) + "]";
      const json& a = apps[i];
      CheckKeys(a, ap,
                {"id", "node", "files", "accepts_html", "inbox_dir", "browser",
                 "interpreter", "server"});
      AppSpec app;
      app.id = Get<std::string>(a, ap, "id");
      if (s.FindApp(app.id))
        Invalid(Join(ap, "id"), "duplicate app '" + app.id + "'");
      app.node = GetOr(a, ap, "node", app.id);
      if (!nodes.insert(app.node).second)
        Invalid(Join(ap, "node"), "duplicate node '" + app.node + "'");
      app.files = GetFiles(a, ap, "files");
      for (const auto& [rel, body] : app.files) {
        if (!IsRelative(rel))
          Invalid(Join(ap, "files") + "." + rel, "expected a relative path");
      }
      app.accepts_html = GetOr(a, ap, "accepts_html", true);
      app.inbox_dir = GetOr(a, ap, "inbox_dir", app.inbox_dir);
      if (a.contains("browser"))
        app.browser = ParseBrowser(a.at("browser"), Join(ap, "browser"),
                                   app.browser_files);
      if (a.contains("interpreter"))
        app.interpreter =
            ParseInterpreter(a.at("interpreter"), Join(ap, "interpreter"));
      if (a.contains("server"))
        app.server = ParseServer(a.at("server"), Join(ap, "server"));
      s.apps.push_back(std::move(app));
    }
  }

  s.public_files = GetFiles(doc, "", "public_files");
  for (const auto& [path, body] : s.public_files) {
    if (!vfs::FileSystem::IsPublicPath(path) || !vfs::IsNormalizedPath(path))
      Invalid("public_files." + path, "expected a path under /sdcard/");
  }

  if (doc.contains("hosts")) {
    const json& hosts = doc.at("hosts");
    if (!hosts.is_array())
      Invalid("hosts", "expected an array");
    for (size_t i = 0; i < hosts.size(); ++i) {
      std::string hp = "hosts[" + std::to_string(i) + "]";
      CheckKeys(hosts[i], hp, {"name", "kind", "pages"});
      HostSpec host;
      host.name = Get<std::string>(hosts[i], hp, "name");
      if (host.name == kDeviceHost || !nodes.insert(host.name).second)
        Invalid(Join(hp, "name"), "duplicate node '" + host.name + "'");
      std::string kind = GetOr<std::string>(hosts[i], hp, "kind", "internet");
      if (kind == "internet")
        host.kind = net::NodeKind::kInternetHost;
      else if (kind == "intranet")
        host.kind = net::NodeKind::kIntranetHost;
      else if (kind == "desktop_browser")
        host.kind = net::NodeKind::kDesktopBrowser;
      else
        Invalid(Join(hp, "kind"), "unknown kind '" + kind + "'");
      host.pages = GetFiles(hosts[i], hp, "pages");
      for (const auto& [page, body] : host.pages) {
        if (!page.starts_with("/"))
          Invalid(Join(hp, "pages") + "." + page, "expected an absolute path");
      }
      s.hosts.push_back(std::move(host));
    }
  }

  const json& adv = doc.contains("adversary") ? doc.at("adversary") : json();
  if (!doc.contains("adversary"))
    Invalid("adversary", "missing");
  CheckKeys(adv, "adversary", {"kind", "node", "permissions"});
  std::string kind = Get<std::string>(adv, "adversary", "kind");
  if (kind == "local")
    s.adversary.kind = AdversaryKind::kLocal;
  else if (kind == "intranet")
    s.adversary.kind = AdversaryKind::kIntranet;
  else if (kind == "internet")
    s.adversary.kind = AdversaryKind::kInternet;
  else
    Invalid("adversary.kind", "unknown kind '" + kind + "'");
  s.adversary.node = Get<std::string>(adv, "adversary", "node");
  auto perms = GetOr<std::vector<std::string>>(adv, "adversary", "permissions", {});
  s.adversary.permissions = {perms.begin(), perms.end()};
  if (s.adversary.kind == AdversaryKind::kLocal) {
    if (s.FindApp(s.adversary.node))
      Invalid("adversary.node", "the adversary app must not be a victim app");
    for (const HostSpec& h : s.hosts) {
      if (h.name == s.adversary.node)
        Invalid("adversary.node", "duplicate node '" + h.name + "'");
    }
  } else {
    auto host = std::find_if(s.hosts.begin(), s.hosts.end(), [&](const HostSpec& h) {
      return h.name == s.adversary.node;
    });
    net::NodeKind want = s.adversary.kind == AdversaryKind::kIntranet
                             ? net::NodeKind::kIntranetHost
                             : net::NodeKind::kInternetHost;
    if (host == s.hosts.end())
      s.hosts.push_back({s.adversary.node, want, {}});
    else if (host->kind != want)
      Invalid("adversary.node", "host kind does not match the adversary kind");
  }

  if (doc.contains("screen"))
    s.screen = ParseScreen(doc.at("screen"), "screen");
  auto trusted = GetOr<std::vector<std::string>>(doc, "", "trusted_clients", {});
  s.trusted_clients = {trusted.begin(), trusted.end()};

  auto targets = GetOr<std::vector<std::string>>(doc, "", "targets", {});
  if (targets.empty())
    Invalid("targets", "at least one target file is required");
  for (size_t i = 0; i < targets.size(); ++i) {
    std::string tp = "targets[" + std::to_string(i) + "]";
    size_t colon = targets[i].find(':');
    if (colon == std::string::npos)
      Invalid(tp, "expected <app>:<relative path>");
    Target t{targets[i].substr(0, colon), targets[i].substr(colon + 1)};
    const AppSpec* app = s.FindApp(t.app);
    if (!app)
      Invalid(tp, "unknown app '" + t.app + "'");
    if (!IsRelative(t.relative))
      Invalid(tp, "expected a relative path");
    bool declared = app->files.contains(t.relative) ||
                    (app->interpreter &&
                     app->interpreter->history_file == t.relative);
    if (!declared)
      Invalid(tp, "target file is not declared in the app's files");
    s.targets.push_back(std::move(t));
  }

  if (!doc.contains("steps") || !doc.at("steps").is_array())
    Invalid("steps", "expected an array");
  const json& steps = doc.at("steps");
  for (size_t i = 0; i < steps.size(); ++i) {
    std::string sp = "steps[" + std::to_string(i) + "]";
    std::string op = Get<std::string>(steps[i], sp, "op");
    auto shape = std::find_if(OpShapes().begin(), OpShapes().end(),
                              [&](const OpShape& o) { return o.op == op; });
    if (shape == OpShapes().end())
      Invalid(Join(sp, "op"), "unknown op '" + op + "'");
    json args = steps[i];
    args.erase("op");
    for (const auto& [key, value] : args.items()) {
      if (std::find(shape->keys.begin(), shape->keys.end(), key) ==
          shape->keys.end()) {
        Invalid(Join(sp, key), "unknown field for op '" + op + "'");
      }
      if (AppStepKeys().contains(key) &&
          (!value.is_string() || !s.FindApp(value.get<std::string>()))) {
        Invalid(Join(sp, key), "unknown app");
      }
    }
    for (size_t k = 0; k < shape->required; ++k) {
      if (!args.contains(std::string(shape->keys[k])))
        Invalid(Join(sp, std::string(shape->keys[k])), "missing");
    }
    s.steps.push_back({op, std::move(args)});
  }

  if (!doc.contains("expected"))
    Invalid("expected", "missing");
  const json& expected = doc.at("expected");
  if (!expected.is_object() || !expected.contains("baseline"))
    Invalid("expected.baseline", "missing");
  for (const auto& [toggle, cell] : expected.items()) {
    if (!cell.is_string() || !IsCell(cell.get<std::string>()))
      Invalid("expected." + toggle, "expected leak(...) or blocked(...)");
    s.expected[toggle] = cell.get<std::string>();
  }

  if (doc.contains("family")) {
    const json& f = doc.at("family");
    CheckKeys(f, "family", {"implication", "android_like", "ios_like"});
    FamilyEntry entry;
    entry.implication = Get<int>(f, "family", "implication");
    if (entry.implication < 0 || entry.implication > 4)
      Invalid("family.implication", "expected 0..4");
    entry.android_like = Get<std::string>(f, "family", "android_like");
    entry.ios_like = Get<std::string>(f, "family", "ios_like");
    if (!IsCell(entry.android_like))
      Invalid("family.android_like", "expected leak(...) or blocked(...)");
    if (!IsCell(entry.ios_like))
      Invalid("family.ios_like", "expected leak(...) or blocked(...)");
    s.family = entry;
  }
  return s;
}

Scenario ParseScenarioText(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Invalid("<document>", e.what());
  }
  return ParseScenario(doc);
}

Scenario LoadScenarioFile(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::kNotFound, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenarioText(buffer.str());
}

const std::vector<Scenario>& Catalog() {
  static const std::vector<Scenario> catalog = [] {
    std::vector<Scenario> out;
    for (std::string_view text : catalog_data::ScenarioSources())
      out.push_back(ParseScenarioText(text));
    std::sort(out.begin(), out.end(), [](const Scenario& a, const Scenario& b) {
      return a.name < b.name;
    });
    return out;
  }();
  return catalog;
}

const Scenario* FindScenario(std::string_view name) {
  for (const Scenario& s : Catalog()) {
    if (s.name == name)
      return &s;
  }
  return nullptr;
}

}  // namespace ifl::harness
