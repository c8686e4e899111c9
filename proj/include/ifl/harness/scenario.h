#ifndef IFL_HARNESS_SCENARIO_H_
#define IFL_HARNESS_SCENARIO_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ifl/cmd/interpreter.h"
#include "ifl/net/network.h"
#include "ifl/server/presets.h"
#include "ifl/web/browser.h"
#include "json.hpp"

namespace ifl::harness {

struct PlatformProfile {
  std::string name;
  net::FileOpening file_opening = net::FileOpening::kDedicatedApp;
  bool dir_randomized = false;
  bool interpreters_allowed = true;
  bool background_servers_allowed = true;
};

const PlatformProfile& AndroidLike();
const PlatformProfile& IosLike();
// Throws Error(kScenarioInvalid) for unknown names.
const PlatformProfile& ProfileByName(std::string_view name);

// Every app and host lives on one Wi-Fi network; device apps share this
// host name.
inline constexpr std::string_view kDeviceHost = "phone";

struct AppSpec {
  std::string id;
  // Network node id; defaults to the app id.
  std::string node;
  // Relative to the app's base_dir.
  std::map<std::string, std::string> files;
  bool accepts_html = true;
  // Where in-app opened attachments land, relative to base_dir.
  std::string inbox_dir = "Documents/Inbox/";
  std::optional<web::RenderConfig> browser;
  web::BrowserFiles browser_files;
  std::optional<cmd::InterpreterConfig> interpreter;
  std::optional<server::ServerConfig> server;
};

struct HostSpec {
  std::string name;
  net::NodeKind kind = net::NodeKind::kInternetHost;
  // Path -> HTML, served on port 80.
  std::map<std::string, std::string> pages;
};

enum class AdversaryKind { kLocal, kIntranet, kInternet };
std::string_view AdversaryKindName(AdversaryKind kind);

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::kInternet;
  // App id for kLocal, host name otherwise.
  std::string node;
  std::set<std::string> permissions;
};

// One attack step; |args| is validated against the op at load time.
struct Step {
  std::string op;
  nlohmann::json args;
};

// How a preset behaves under both shipped profiles.
struct FamilyEntry {
  // 1-4 for the platform implication the preset demonstrates, 0 for a
  // control that must not differ.
  int implication = 0;
  std::string android_like;
  std::string ios_like;
};

struct Target {
  std::string app;
  std::string relative;

  std::string Label() const { return app + ":" + relative; }
};

struct Scenario {
  std::string name;
  std::vector<std::string> tags;
  std::string note;
  PlatformProfile profile;
  std::optional<uint64_t> seed;
  bool rooted = false;
  std::vector<AppSpec> apps;
  // Absolute paths under public storage.
  std::map<std::string, std::string> public_files;
  std::vector<HostSpec> hosts;
  AdversarySpec adversary;
  std::optional<net::ScreenState> screen;
  std::set<std::string> trusted_clients;
  std::vector<Target> targets;
  std::vector<Step> steps;
  // Toggle name -> expected cell. Only "baseline" is mandatory; a missing
  // toggle expects the baseline cell.
  std::map<std::string, std::string> expected;
  std::optional<FamilyEntry> family;

  bool HasTag(std::string_view tag) const;
  const AppSpec* FindApp(std::string_view id) const;
  AppSpec* FindApp(std::string_view id);
};

// Throws Error(kScenarioInvalid) naming the offending field path, e.g.
// "steps[2].op".
Scenario ParseScenario(const nlohmann::json& doc);
Scenario ParseScenarioText(std::string_view text);
Scenario LoadScenarioFile(const std::string& path);

// The built-in preset catalog, sorted by name.
const std::vector<Scenario>& Catalog();
const Scenario* FindScenario(std::string_view name);

}  // namespace ifl::harness

#endif  // IFL_HARNESS_SCENARIO_H_
