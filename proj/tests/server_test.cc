#include "doctest.h"

#include <set>

#include "ifl/base/error.h"
#include "ifl/server/app_server.h"
#include "ifl/server/attacks.h"
#include "ifl/server/presets.h"
#include "ifl/web/browser.h"
#include "ifl/web/site.h"
#include "ifl/world/world.h"

using namespace ifl;
using namespace ifl::server;

namespace {

constexpr char kApp[] = "com.files.app";
constexpr char kNotes[] = "my private notes\n";

// A phone running one embedded server, a desktop on the same Wi-Fi, a LAN
// attacker and an Internet host.
struct Bench {
  World world{3};
  std::optional<AppServer> server;

  explicit Bench(ServerConfig config, std::set<std::string> trusted = {"desktop"}) {
    int uid = world.fs.InstallApp(kApp, {}).uid;
    world.fs.Write(std::string("/data/data/") + kApp + "/notes.db", uid, kNotes);
    world.net.AddNode(kApp, net::NodeKind::kDeviceApp, "phone", kApp);
    world.net.AddNode("desktop", net::NodeKind::kDesktopBrowser, "desktop");
    world.net.AddNode("lan-pc", net::NodeKind::kIntranetHost, "lan-pc");
    world.net.AddNode("evil.com", net::NodeKind::kInternetHost, "evil.com");
    server.emplace(world, kApp, kApp, std::move(config), std::move(trusted));
    server->Start();
  }

  int port() const { return server->config().port; }
  std::string Url(const std::string& path) const {
    return "http://phone:" + std::to_string(port()) + path;
  }
};

ServerConfig CodeServer(int length, std::string charset, std::string secret) {
  ServerConfig c;
  c.id = "code";
  c.port = 7000;
  c.auth = {AuthPolicy::Kind::kCode, length, std::move(charset), std::move(secret)};
  return c;
}

const ServerConfig& Preset(std::string_view id) {
  const ServerConfig* p = FindPreset(id);
  REQUIRE(p);
  return *p;
}

Errc CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::kNoMatch;
}

}  // namespace

TEST_CASE("preset database") {
  const auto& presets = BuiltinPresets();
  CHECK(presets.size() == 11);
  std::vector<int> ports(11);
  for (const ServerConfig& p : presets) {
    if (p.table_row > 0)
      ports[p.table_row] = p.port;
  }
  const std::vector<int> table_ports = {8888, 1234, 6789, 8000,  2121,
                                        80,   8080, 15555, 8080, 8080};
  for (size_t row = 1; row <= 10; ++row) {
    CAPTURE(row);
    CHECK(ports[row] == table_ports[row - 1]);
  }
  CHECK(FindPreset("WiFi File Transfer") == FindPreset("wifi-file-transfer"));
  CHECK_FALSE(FindPreset("nope"));
  CHECK(CharsetChars("digits") == "0123456789");
  CHECK(CharsetChars("lowercase").size() == 26);
  CHECK(CodeOf([] { CharsetChars("emoji"); }) == Errc::kUnsupportedAuth);
}

TEST_CASE("unauthenticated download") {
  Bench b(Preset("wifi-file-explorer"));
  CHECK(DirectDownload(b.world, "lan-pc", "phone", b.port(), "notes.db") == kNotes);
  REQUIRE(b.world.loot.size() == 1);
  CHECK(b.world.loot[0].via == "download:notes.db");

  HttpSession s(b.world, "lan-pc", "phone", b.port());
  CHECK(s.Send("GET", "/download", "path=../x").status == 400);
  CHECK(s.Send("GET", "/download", "path=missing").status == 404);
  CHECK(s.Send("GET", "/list").body == "notes.db\n");
}

TEST_CASE("brute force counts") {
  SUBCASE("one digit") {
    Bench b(CodeServer(1, "digits", "7"));
    HttpSession s(b.world, "lan-pc", "phone", b.port());
    BruteForceResult r = BruteForce(b.world, s, 1, CharsetChars("digits"));
    CHECK(r.code == "7");
    CHECK(r.attempts == 8);
    CHECK(Download(b.world, s, "notes.db") == kNotes);
  }
  SUBCASE("two lowercase, worst case") {
    Bench b(CodeServer(2, "lowercase", "zz"));
    HttpSession s(b.world, "lan-pc", "phone", b.port());
    CHECK(BruteForce(b.world, s, 2, CharsetChars("lowercase")).attempts == 26 * 26);
  }
  SUBCASE("four digits") {
    const ServerConfig& xender = Preset("xender");
    Bench b(xender);
    HttpSession s(b.world, "lan-pc", "phone", b.port());
    BruteForceResult r = BruteForce(b.world, s, 4, CharsetChars("digits"));
    CHECK(r.code == xender.auth.secret);
    CHECK(r.attempts == std::stoull(xender.auth.secret) + 1);
    CHECK(r.attempts <= 10000);
  }
  SUBCASE("exhausted") {
    Bench b(CodeServer(1, "digits", "x"));
    HttpSession s(b.world, "lan-pc", "phone", b.port());
    CHECK(CodeOf([&] { BruteForce(b.world, s, 1, "0123456789"); }) ==
          Errc::kAuthFailed);
    CHECK(b.world.trace.Count("brute-force") == 1);
  }
}

TEST_CASE("fingerprints") {
  const auto& db = FingerprintDatabase();
  std::set<std::string> signatures;
  for (const FingerprintEntry& e : db)
    signatures.insert(e.signature);
  CHECK(signatures.size() == db.size());

  for (const ServerConfig& preset : BuiltinPresets()) {
    CAPTURE(preset.id);
    Bench b(preset);
    std::vector<Guess> guesses = FingerprintProbe(b.world, "lan-pc", "phone");
    REQUIRE_FALSE(guesses.empty());
    CHECK(guesses.front().id == preset.id);
    // A connection-confirm server refuses the scanner; the port decides.
    bool confirms = preset.alert == AlertPolicy::kPerConnectionConfirm;
    CHECK(guesses.front().signature_match == !confirms);
    if (!confirms)
      CHECK((guesses.size() == 1 || !guesses[1].signature_match));
  }

  World empty(1);
  empty.net.AddNode("phone.app", net::NodeKind::kDeviceApp, "phone", "x");
  empty.net.AddNode("lan-pc", net::NodeKind::kIntranetHost, "lan-pc");
  CHECK(CodeOf([&] { FingerprintProbe(empty, "lan-pc", "phone"); }) ==
        Errc::kNoMatch);
}

TEST_CASE("sniff and replay") {
  ServerConfig plain = Preset("photo-transfer-wifi");
  {
    Bench b(plain);
    web::Browser desktop(b.world, "desktop", std::nullopt, {});
    desktop.Navigate(b.Url("/"));
    REQUIRE(desktop.Submit(b.Url("/auth"), "password=" + plain.auth.secret));
    CHECK(SniffReplay(b.world, "lan-pc", "phone", b.port(), "notes.db") == kNotes);
    CHECK(b.world.trace.events().back().kind != "no-credential");
  }
  {
    ServerConfig sealed = plain;
    sealed.encrypted = true;
    Bench b(sealed);
    web::Browser desktop(b.world, "desktop", std::nullopt, {});
    desktop.Navigate(b.Url("/"));
    REQUIRE(desktop.Submit(b.Url("/auth"), "password=" + plain.auth.secret));
    std::vector<net::Frame> frames = b.world.net.Sniff("lan-pc", net::Scope::kIntranet);
    REQUIRE_FALSE(frames.empty());
    std::string dump = net::Network::DumpCapture(frames);
    for (const net::Frame& f : frames) {
      CHECK(f.request.find(plain.auth.secret) == std::string::npos);
      CHECK(f.response.find("sid=") == std::string::npos);
    }
    CHECK(CodeOf([&] {
            SniffReplay(b.world, "lan-pc", "phone", b.port(), "notes.db");
          }) == Errc::kAuthFailed);
    CHECK(b.world.trace.Contains("no-credential"));
  }
}

TEST_CASE("session cookie replay") {
  Bench b(Preset("wifi-file-transfer"));
  web::Browser desktop(b.world, "desktop", std::nullopt, {});
  desktop.Navigate(b.Url("/"));
  desktop.Submit(b.Url("/auth"), "");
  desktop.Navigate(b.Url("/list"));
  CHECK(SniffReplay(b.world, "lan-pc", "phone", b.port(), "notes.db") == kNotes);
}

TEST_CASE("per-request tokens are single use") {
  ServerConfig c;
  c.port = 7100;
  c.session = SessionModel::kPerRequestUrlToken;
  Bench b(c);
  HttpSession s(b.world, "lan-pc", "phone", b.port());
  CHECK(s.Send("GET", "/list").status == 401);
  net::HttpResponse index = s.Send("GET", "/");
  std::string first = *index.Header("X-Request-Token");
  // HttpSession appends the freshest token itself.
  CHECK(s.Send("GET", "/list").status == 200);

  HttpSession stale(b.world, "lan-pc", "phone", b.port());
  net::HttpResponse reused = stale.Send("GET", "/list", "token=" + first);
  CHECK(reused.status == 401);
  CHECK(reused.Header("X-Deny-Reason") == "token");
  CHECK(b.world.trace.FirstBlocking()->kind == "token");
}

TEST_CASE("connection confirmation") {
  Bench b(Preset("airdroid"));
  CHECK(CodeOf([&] { HttpSession(b.world, "lan-pc", "phone", b.port()); }) ==
        Errc::kConnectionRejected);
  HttpSession ok(b.world, "desktop", "phone", b.port());
  CHECK(b.world.trace.UserVisible().size() >= 2);
}

TEST_CASE("upload csrf") {
  struct Row {
    const char* preset;
    UploadPolicy upload;
    SessionModel session;
    const char* stage;
  };
  const Row rows[] = {
      {"wifi-file-transfer", UploadPolicy::kAny, SessionModel::kCookieToken, nullptr},
      {"wifi-file-transfer", UploadPolicy::kAny, SessionModel::kPerRequestUrlToken,
       "token"},
      {"wifi-file-transfer", UploadPolicy::kPhotosOnly, SessionModel::kCookieToken,
       "upload-policy"},
      {"wifi-file-transfer", UploadPolicy::kAnyRenderedAsText,
       SessionModel::kCookieToken, "view-rendering"},
      {"wifi-file-transfer", UploadPolicy::kDisabled, SessionModel::kCookieToken,
       "upload-policy"},
  };
  for (const Row& row : rows) {
    CAPTURE(row.stage ? row.stage : "leak");
    ServerConfig c = Preset(row.preset);
    c.upload = row.upload;
    c.session = row.session;
    Bench b(c);
    web::StaticSite site(b.world, "evil.com");
    site.Serve();
    web::Browser desktop(b.world, "desktop", std::nullopt, {});
    desktop.Navigate(b.Url("/"));
    desktop.Submit(b.Url("/auth"), "");
    std::vector<web::Exfiltration> out =
        CsrfUploadAttack(b.world, site, "evil.com", desktop, "phone", b.port(),
                         "notes.db");
    if (row.stage) {
      CHECK(out.empty());
      REQUIRE(b.world.trace.FirstBlocking());
      CHECK(b.world.trace.FirstBlocking()->kind == row.stage);
    } else {
      REQUIRE(out.size() == 1);
      CHECK(out[0].bytes == kNotes);
      CHECK(b.world.net.node("evil.com").inbox.size() == 1);
    }
  }
}

TEST_CASE("screen-off reachability follows background support") {
  ServerConfig fg = Preset("wifi-photo-transfer");
  fg.background_capable = false;
  Bench b(fg);
  b.world.net.SetScreen("phone", net::ScreenState::OffLocked());
  CHECK(CodeOf([&] { DirectDownload(b.world, "lan-pc", "phone", b.port(), "notes.db"); }) ==
        Errc::kUnreachable);
  b.world.net.SetScreen("phone", net::ScreenState::Foreground(kApp));
  CHECK(DirectDownload(b.world, "lan-pc", "phone", b.port(), "notes.db") == kNotes);
}

TEST_CASE("response signatures ignore header values") {
  net::HttpResponse a;
  a.headers["Set-Cookie"] = "sid=1";
  net::HttpResponse b = a;
  b.headers["Set-Cookie"] = "sid=2";
  CHECK(ResponseSignature(a) == ResponseSignature(b));
  b.body = "x";
  CHECK(ResponseSignature(a) != ResponseSignature(b));
  CHECK(ResponseSignature(a).size() == 32);
}
