#include "ifl/harness/runner.h"

#include <algorithm>
#include <map>
#include <memory>

#include "ifl/base/codec.h"
#include "ifl/base/error.h"
#include "ifl/cmd/ssh.h"
#include "ifl/server/app_server.h"
#include "ifl/server/attacks.h"
#include "ifl/web/site.h"
#include "ifl/world/world.h"

namespace ifl::harness {

using nlohmann::json;

namespace {

constexpr uint64_t kDefaultSeed = 1;

std::string Str(const json& args, const std::string& key,
                const std::string& fallback = {}) {
  return args.contains(key) ? args.at(key).get<std::string>() : fallback;
}

// Replaces "{find:<suffix>}" with the first line of |previous| ending in
// <suffix>.
std::string Substitute(const std::string& command, const std::string& previous) {
  size_t open = command.find("{find:");
  if (open == std::string::npos)
    return command;
  size_t close = command.find('}', open);
  if (close == std::string::npos)
    throw Error(Errc::kScenarioInvalid, "unterminated {find:} in " + command);
  std::string suffix = command.substr(open + 6, close - open - 6);
  size_t pos = 0;
  while (pos < previous.size()) {
    size_t end = previous.find('\n', pos);
    if (end == std::string::npos)
      end = previous.size();
    std::string line = previous.substr(pos, end - pos);
    if (line.ends_with(suffix))
      return Substitute(command.substr(0, open) + line + command.substr(close + 1),
                        previous);
    pos = end + 1;
  }
  throw Error(Errc::kNotFound, "no listed path ends with " + suffix);
}

class Run {
 public:
  Run(const Scenario& s, const PlatformProfile& profile, uint64_t seed,
      bool auth_access)
      : s_(s), profile_(profile), world_(seed) {
    world_.device_rooted = s.rooted;
    world_.auth_access = auth_access;
    Setup();
  }

  void Execute() {
    for (size_t i = 0; i < s_.steps.size(); ++i) {
      const Step& step = s_.steps[i];
      try {
        Dispatch(step);
      } catch (const Error& e) {
        world_.trace.Record({std::string(ErrcName(e.code())), s_.adversary.node,
                             "step " + std::to_string(i) + " " + step.op,
                             e.what(), true});
      }
    }
  }

  AttackReport Judge() const {
    AttackReport report;
    report.seed = world_.seed;
    for (const Loot& loot : world_.loot)
      report.captures.push_back({loot.via, loot.bytes});
    for (const std::string& sink : Sinks()) {
      const net::Node* node = world_.net.FindNode(sink);
      if (!node)
        continue;
      for (const net::Message& m : node->inbox)
        report.captures.push_back({"message:" + m.from + "->" + sink, m.payload});
    }
    for (const Target& t : s_.targets) {
      std::string path = Base(t.app) + t.relative;
      const vfs::FileNode* file = world_.fs.Stat(path);
      if (!file)
        continue;
      for (const Capture& c : report.captures) {
        if (c.bytes == file->content) {
          report.leaked.push_back({t.Label(), path, c.via, c.bytes, true});
          report.leaked_targets.push_back(t.Label());
          break;
        }
      }
    }
    report.leak = !report.leaked.empty();
    if (!report.leak) {
      std::optional<Event> first = world_.trace.FirstBlocking();
      report.blocked_stage = first ? first->kind : "no-leak";
    }
    report.trace = world_.trace.events();
    return report;
  }

 private:
  void Setup() {
    vfs::DirPolicy dirs{profile_.dir_randomized, world_.seed};
    for (const AppSpec& app : s_.apps) {
      const vfs::AppZone& zone = world_.fs.InstallApp(app.id, dirs);
      for (const auto& [rel, body] : app.files)
        world_.fs.Write(zone.base_dir + rel, zone.uid, body);
      world_.net.AddNode(app.node, net::NodeKind::kDeviceApp,
                         std::string(kDeviceHost), app.id);
    }
    if (s_.adversary.kind == AdversaryKind::kLocal) {
      world_.fs.InstallApp(s_.adversary.node, dirs);
      world_.net.AddNode(s_.adversary.node, net::NodeKind::kDeviceApp,
                         std::string(kDeviceHost), s_.adversary.node);
    }
    for (const auto& [path, body] : s_.public_files)
      world_.fs.Write(path, vfs::kRootUid, body);

    for (const HostSpec& host : s_.hosts) {
      world_.net.AddNode(host.name, host.kind, host.name);
      if (host.kind == net::NodeKind::kDesktopBrowser) {
        desktops_[host.name] = std::make_unique<web::Browser>(
            world_, host.name, std::nullopt, web::RenderConfig{});
        continue;
      }
      auto site = std::make_unique<web::StaticSite>(world_, host.name);
      for (const auto& [path, body] : host.pages)
        site->Put(path, body);
      site->Serve();
      sites_[host.name] = std::move(site);
    }

    for (const AppSpec& app : s_.apps) {
      if (app.browser) {
        browsers_[app.id] = std::make_unique<web::Browser>(
            world_, app.node, app.id, *app.browser, app.browser_files);
      }
      if (app.interpreter) {
        if (!profile_.interpreters_allowed) {
          world_.trace.Record({"no-target", app.id, "",
                               "interpreters are not allowed on " + profile_.name,
                               true});
        } else {
          auto interp = std::make_unique<cmd::Interpreter>(
              world_, app.id, app.node, *app.interpreter);
          interp->ServeSsh();
          interpreters_[app.id] = std::move(interp);
        }
      }
      if (app.server) {
        auto server = std::make_unique<server::AppServer>(
            world_, app.id, app.node, *app.server, s_.trusted_clients);
        server->Start(profile_.background_servers_allowed);
        servers_[app.id] = std::move(server);
      }
    }
    if (s_.screen)
      world_.net.SetScreen(std::string(kDeviceHost), *s_.screen);
  }

  std::vector<std::string> Sinks() const {
    std::vector<std::string> out = {s_.adversary.node};
    return out;
  }

  std::string Base(const std::string& app) const {
    const vfs::AppZone* zone = world_.fs.FindApp(app);
    if (!zone)
      throw Error(Errc::kUnknownApp, app);
    return zone->base_dir;
  }

  const AppSpec& App(const json& args, const std::string& key = "app") const {
    return *s_.FindApp(args.at(key).get<std::string>());
  }

  web::Browser& BrowserOf(const std::string& app) {
    auto it = browsers_.find(app);
    if (it == browsers_.end())
      throw Error(Errc::kNotFound, app + " has no browsing interface");
    return *it->second;
  }

  web::Browser& Desktop(const std::string& name) {
    auto it = desktops_.find(name);
    if (it == desktops_.end())
      throw Error(Errc::kScenarioInvalid, name + " is not a desktop browser");
    return *it->second;
  }

  cmd::Interpreter& InterpreterOf(const std::string& app) {
    auto it = interpreters_.find(app);
    if (it == interpreters_.end())
      throw Error(Errc::kNotFound, app + " runs no command interpreter");
    return *it->second;
  }

  server::AppServer& ServerOf(const std::string& app) {
    auto it = servers_.find(app);
    if (it == servers_.end())
      throw Error(Errc::kNotFound, app + " runs no server");
    return *it->second;
  }

  int AdversaryUid() const {
    const vfs::AppZone* zone = world_.fs.FindApp(s_.adversary.node);
    if (s_.adversary.kind != AdversaryKind::kLocal || !zone)
      throw Error(Errc::kNotPermitted, "only a local app holds a uid");
    return zone->uid;
  }

  static web::Interaction ParseInteraction(const json& args) {
    web::Interaction in;
    std::string action = Str(args, "action", "none");
    if (action == "click")
      in.action = web::UserAction::kClick;
    else if (action == "long_press")
      in.action = web::UserAction::kLongPress;
    else if (action != "none")
      throw Error(Errc::kScenarioInvalid, "unknown action " + action);
    in.link = args.contains("link") ? args.at("link").get<size_t>() : 0;
    return in;
  }

  std::string ServerBase(const server::AppServer& server) const {
    return "http://" + std::string(kDeviceHost) + ":" +
           std::to_string(server.config().port);
  }

  void Dispatch(const Step& step) {
    const json& a = step.args;
    const std::string& adv = s_.adversary.node;
    const std::string device(kDeviceHost);
    const std::string& op = step.op;

    if (op == "deliver") {
      const AppSpec& victim = App(a, "to");
      std::optional<net::VectorKind> kind = net::ParseVectorKind(Str(a, "vector"));
      if (!kind)
        throw Error(Errc::kScenarioInvalid, "unknown vector " + Str(a, "vector"));
      net::AttackVector vector{*kind, Str(a, "url"), Str(a, "file_name"),
                               Str(a, "content")};
      net::DeliveryPolicy policy{profile_.file_opening, victim.accepts_html};
      world_.net.Deliver(adv, victim.node, std::move(vector), policy);
    } else if (op == "open") {
      const AppSpec& app = App(a);
      web::Interaction interaction = ParseInteraction(a);
      if (a.contains("url")) {
        BrowserOf(app.id).Navigate(Str(a, "url"), interaction);
        return;
      }
      std::optional<net::Delivery> d = world_.net.TakeDelivery(app.node);
      if (!d)
        throw Error(Errc::kNotFound, "nothing was delivered to " + app.id);
      if (d->outcome == net::DeliveryOutcome::kHandedToDedicatedApp) {
        world_.trace.Record({"routed-to-dedicated-app", app.node,
                             d->vector.file_name,
                             "opened outside " + app.id + "'s zone", true});
        return;
      }
      web::Browser& browser = BrowserOf(app.id);
      if (d->vector.kind == net::VectorKind::kWebPage) {
        browser.Navigate(d->vector.url, interaction);
        return;
      }
      std::string path = Base(app.id) + app.inbox_dir + d->vector.file_name;
      world_.fs.Write(path, world_.fs.FindApp(app.id)->uid, d->vector.content);
      browser.Open(origin::ParseUrl("file://" + path), interaction);
    } else if (op == "bookmark") {
      BrowserOf(App(a).id).Bookmark();
    } else if (op == "open_store_ui") {
      std::string store = Str(a, "store");
      if (store != "history" && store != "bookmarks")
        throw Error(Errc::kScenarioInvalid, "unknown store " + store);
      BrowserOf(App(a).id).RenderStoreUi(store == "history" ? web::Store::kHistory
                                                            : web::Store::kBookmarks);
    } else if (op == "invoke_component") {
      cmd::Caller caller{adv, AdversaryUid(), s_.adversary.permissions};
      InterpreterOf(App(a).id)
          .InvokeComponent(caller, Str(a, "component"), cmd::SplitArgv(Str(a, "argv")));
    } else if (op == "adversary_read") {
      std::string path = Str(a, "path");
      world_.AddLoot("read:" + path, world_.fs.Read(path, AdversaryUid()));
    } else if (op == "ssh") {
      const cmd::Interpreter& interp = InterpreterOf(App(a).id);
      cmd::SshClient client(world_, adv, device, interp.config().ssh_port);
      std::string user = Str(a, "user");
      if (user.empty()) {
        // The banner names the account to log into.
        size_t at = client.banner().find("user=");
        user = at == std::string::npos ? "user" : client.banner().substr(at + 5);
        while (!user.empty() && (user.back() == '\n' || user.back() == '\r'))
          user.pop_back();
      }
      client.Login(user, Str(a, "password", "admin"));
      std::string previous;
      for (const json& c : a.at("commands")) {
        std::string line = Substitute(c.get<std::string>(), previous);
        previous = client.Run(cmd::SplitArgv(line));
        world_.AddLoot("ssh:" + line, previous);
      }
    } else if (op == "ssh_banner") {
      cmd::ProbeBanner(world_, adv, device,
                       InterpreterOf(App(a).id).config().ssh_port);
    } else if (op == "scan") {
      world_.net.ScanPorts(adv, Str(a, "host", device));
    } else if (op == "fingerprint") {
      server::FingerprintProbe(world_, adv, Str(a, "host", device));
    } else if (op == "legit_session") {
      web::Browser& browser = Desktop(Str(a, "client"));
      const server::AppServer& server = ServerOf(App(a).id);
      std::string base = ServerBase(server);
      browser.Navigate(base + "/");
      const server::AuthPolicy& auth = server.config().auth;
      std::optional<std::string> body;
      switch (auth.kind) {
        case server::AuthPolicy::Kind::kNone:
          break;
        case server::AuthPolicy::Kind::kCode:
          body = "code=" + auth.secret;
          break;
        case server::AuthPolicy::Kind::kPassword:
          body = "password=" + auth.secret;
          break;
        case server::AuthPolicy::Kind::kConfirmAction:
          body = "";
          break;
      }
      if (body && !browser.Submit(base + "/auth", *body))
        throw Error(Errc::kAuthFailed, "the legitimate user could not log in");
      if (a.contains("download")) {
        browser.Navigate(base + "/download?path=" +
                         codec::PercentEncode(Str(a, "download")));
      }
    } else if (op == "download") {
      server::DirectDownload(world_, adv, device,
                             ServerOf(App(a).id).config().port, Str(a, "path"));
    } else if (op == "brute_force") {
      const server::ServerConfig& config = ServerOf(App(a).id).config();
      if (config.auth.kind != server::AuthPolicy::Kind::kCode)
        throw Error(Errc::kUnsupportedAuth, config.name + " has no numeric code");
      server::HttpSession session(world_, adv, device, config.port);
      server::BruteForce(world_, session, config.auth.length,
                         server::CharsetChars(config.auth.charset));
      server::Download(world_, session, Str(a, "path"));
    } else if (op == "sniff_replay") {
      server::SniffReplay(world_, adv, device, ServerOf(App(a).id).config().port,
                          Str(a, "path"));
    } else if (op == "csrf_upload") {
      auto site = sites_.find(adv);
      if (site == sites_.end())
        throw Error(Errc::kNotPermitted, adv + " serves no web pages");
      server::CsrfUploadAttack(world_, *site->second, adv,
                               Desktop(Str(a, "victim")), device,
                               ServerOf(App(a).id).config().port, Str(a, "path"),
                               Str(a, "file_name", "photos.html"));
    } else if (op == "set_screen") {
      std::string state = Str(a, "state");
      if (state == "off_locked")
        world_.net.SetScreen(device, net::ScreenState::OffLocked());
      else if (state == "foreground" && a.contains("app"))
        world_.net.SetScreen(device, net::ScreenState::Foreground(App(a).id));
      else
        throw Error(Errc::kScenarioInvalid, "bad screen state " + state);
    } else {
      throw Error(Errc::kScenarioInvalid, "unknown op " + op);
    }
  }

  const Scenario& s_;
  const PlatformProfile& profile_;
  World world_;
  std::map<std::string, std::unique_ptr<web::Browser>> browsers_;
  std::map<std::string, std::unique_ptr<web::Browser>> desktops_;
  std::map<std::string, std::unique_ptr<web::StaticSite>> sites_;
  std::map<std::string, std::unique_ptr<cmd::Interpreter>> interpreters_;
  std::map<std::string, std::unique_ptr<server::AppServer>> servers_;
};

}  // namespace

const std::vector<Toggle>& AllToggles() {
  static const std::vector<Toggle> all = {
      Toggle::kBaseline,        Toggle::kEnhancedSop,
      Toggle::kNoJs,            Toggle::kAuthAccess,
      Toggle::kDirRandomized,   Toggle::kPerRequestToken,
      Toggle::kPerConnectionConfirm, Toggle::kPhotosOnly,
  };
  return all;
}

std::string_view ToggleName(Toggle toggle) {
  switch (toggle) {
    case Toggle::kBaseline:
      return "baseline";
    case Toggle::kEnhancedSop:
      return "enhanced-sop";
    case Toggle::kNoJs:
      return "nojs";
    case Toggle::kAuthAccess:
      return "auth-access";
    case Toggle::kDirRandomized:
      return "dir-randomized";
    case Toggle::kPerRequestToken:
      return "per-request-token";
    case Toggle::kPerConnectionConfirm:
      return "per-connection-confirm";
    case Toggle::kPhotosOnly:
      return "photos-only";
  }
  return "";
}

std::optional<Toggle> ParseToggle(std::string_view name) {
  for (Toggle t : AllToggles()) {
    if (ToggleName(t) == name)
      return t;
  }
  return std::nullopt;
}

const std::vector<std::string>& DesignatedTags(Toggle toggle) {
  static const std::map<Toggle, std::vector<std::string>> tags = {
      {Toggle::kBaseline, {}},
      {Toggle::kEnhancedSop, {"sopIFL"}},
      {Toggle::kNoJs, {"sopIFL", "aimIFL-1", "aimIFL-2"}},
      {Toggle::kAuthAccess, {"cmdIFL"}},
      {Toggle::kDirRandomized, {"file-path-guess"}},
      {Toggle::kPerRequestToken, {"serverIFL:csrf"}},
      {Toggle::kPerConnectionConfirm, {"serverIFL:direct"}},
      {Toggle::kPhotosOnly, {"serverIFL:csrf"}},
  };
  return tags.at(toggle);
}

bool IsDesignated(const Scenario& scenario, Toggle toggle) {
  for (const std::string& tag : DesignatedTags(toggle)) {
    if (scenario.HasTag(tag))
      return true;
  }
  return false;
}

Scenario ApplyToggle(Scenario s, Toggle toggle) {
  for (AppSpec& app : s.apps) {
    if (app.browser && toggle == Toggle::kEnhancedSop)
      app.browser->sop.mode = origin::SopMode::kEnhanced;
    if (app.browser && toggle == Toggle::kNoJs)
      app.browser->js_local_enabled = false;
    if (!app.server)
      continue;
    if (toggle == Toggle::kPerRequestToken)
      app.server->session = server::SessionModel::kPerRequestUrlToken;
    if (toggle == Toggle::kPerConnectionConfirm)
      app.server->alert = server::AlertPolicy::kPerConnectionConfirm;
    // Narrows what an upload endpoint accepts; never opens a disabled one.
    if (toggle == Toggle::kPhotosOnly &&
        app.server->upload != server::UploadPolicy::kDisabled) {
      app.server->upload = server::UploadPolicy::kPhotosOnly;
    }
  }
  if (toggle == Toggle::kDirRandomized)
    s.profile.dir_randomized = true;
  return s;
}

std::string AttackReport::Cell() const {
  if (!leak)
    return "blocked(" + blocked_stage + ")";
  std::string out = "leak(";
  for (size_t i = 0; i < leaked_targets.size(); ++i)
    out += (i ? "," : "") + leaked_targets[i];
  return out + ")";
}

std::vector<Event> AttackReport::Alerts() const {
  std::vector<Event> out;
  for (const Event& e : trace) {
    if (e.user_visible)
      out.push_back(e);
  }
  return out;
}

AttackReport RunScenario(const Scenario& scenario, const RunOptions& options) {
  Scenario s = ApplyToggle(scenario, options.toggle);
  if (options.profile) {
    s.profile = *options.profile;
    if (options.toggle == Toggle::kDirRandomized)
      s.profile.dir_randomized = true;
  }
  uint64_t seed = options.seed.value_or(s.seed.value_or(kDefaultSeed));

  Run run(s, s.profile, seed, options.toggle == Toggle::kAuthAccess);
  run.Execute();
  AttackReport report = run.Judge();
  report.scenario = s.name;
  report.profile = s.profile.name;
  report.toggle = std::string(ToggleName(options.toggle));

  if (options.profile) {
    if (s.family && options.toggle == Toggle::kBaseline) {
      report.expected = s.profile.name == AndroidLike().name
                            ? s.family->android_like
                            : s.family->ios_like;
    }
  } else if (auto it = s.expected.find(report.toggle); it != s.expected.end()) {
    report.expected = it->second;
  } else {
    report.expected = s.expected.at("baseline");
  }
  return report;
}

}  // namespace ifl::harness
