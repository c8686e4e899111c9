#include "ifl/cmd/interpreter.h"

#include <map>
#include <memory>

#include "ifl/base/codec.h"
#include "ifl/base/error.h"

namespace ifl::cmd {

namespace {

[[noreturn]] void Usage(const std::string& what) {
  throw Error(Errc::kUnknownCommand, "usage: " + what);
}

// Returns nullopt for anything that is not a recognised mode.
std::optional<bool> WorldReadableFromMode(std::string_view mode) {
  if (mode == "a+r" || mode == "o+r")
    return true;
  if (mode == "a-r" || mode == "o-r")
    return false;
  if (mode.empty() || mode.size() > 4)
    return std::nullopt;
  int bits = 0;
  for (char c : mode) {
    if (c < '0' || c > '7')
      return std::nullopt;
    bits = bits * 8 + (c - '0');
  }
  return (bits & 04) != 0;
}

std::string BaseName(std::string_view path) {
  size_t slash = path.rfind('/');
  return std::string(slash == std::string_view::npos ? path
                                                     : path.substr(slash + 1));
}

}  // namespace

std::vector<std::string> SplitArgv(std::string_view line) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
      ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t')
      ++i;
    if (i > start)
      out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::string JoinArgv(const std::vector<std::string>& argv) {
  std::string out;
  for (const std::string& a : argv) {
    if (!out.empty())
      out += ' ';
    out += a;
  }
  return out;
}

Interpreter::Interpreter(World& world, std::string app_id, std::string node_id,
                         InterpreterConfig config)
    : world_(world),
      app_id_(std::move(app_id)),
      node_(std::move(node_id)),
      config_(std::move(config)) {}

bool Interpreter::runs_as_root() const {
  return config_.tries_root && world_.device_rooted;
}

int Interpreter::app_uid() const {
  const vfs::AppZone* zone = world_.fs.FindApp(app_id_);
  if (!zone)
    throw Error(Errc::kUnknownApp, app_id_);
  return zone->uid;
}

int Interpreter::effective_uid() const {
  return runs_as_root() ? vfs::kRootUid : app_uid();
}

std::string Interpreter::ShellUser() const {
  return runs_as_root() ? "root" : "user";
}

std::string Interpreter::Home() const {
  const vfs::AppZone* zone = world_.fs.FindApp(app_id_);
  if (!zone)
    throw Error(Errc::kUnknownApp, app_id_);
  return zone->base_dir;
}

std::string Interpreter::HistoryPath() const {
  return Home() + config_.history_file;
}

std::string Interpreter::Resolve(std::string_view path) const {
  if (path.starts_with('/'))
    return std::string(path);
  return Home() + std::string(path);
}

void Interpreter::RequireGrant(const std::vector<std::string>& argv,
                               const std::string& requester) {
  std::vector<std::string> paths;
  const std::string& cmd = argv[0];
  if (cmd == "history") {
    paths.push_back(HistoryPath());
  } else if (cmd == "chmod") {
    if (argv.size() > 2)
      paths.push_back(Resolve(argv[2]));
  } else if (cmd == "cp") {
    for (size_t i = 1; i < argv.size() && i < 3; ++i)
      paths.push_back(Resolve(argv[i]));
  } else if (argv.size() > 1) {
    paths.push_back(Resolve(argv[1]));
  }
  bool touches_private = false;
  for (const std::string& p : paths) {
    const vfs::AppZone* zone = world_.fs.ZoneForPath(p);
    if (zone && zone->zone_kind == vfs::ZoneKind::kPrivate)
      touches_private = true;
  }
  if (touches_private && !world_.AskUser(requester, JoinArgv(argv)))
    throw Error(Errc::kPermissionDenied, "user declined: " + JoinArgv(argv));
}

CommandOutcome Interpreter::Execute(const std::vector<std::string>& argv,
                                    const std::string& requester) {
  if (argv.empty())
    Usage("<command> [args]");
  std::string line = JoinArgv(argv);
  world_.fs.Append(HistoryPath(), app_uid(), line + "\n");
  world_.trace.Record({"exec", requester, app_id_,
                       line + (runs_as_root() ? " [root]" : "")});
  if (world_.auth_access)
    RequireGrant(argv, requester);
  return {Run(argv)};
}

std::string Interpreter::Run(const std::vector<std::string>& argv) {
  const std::string& cmd = argv[0];
  int uid = effective_uid();
  if (cmd == "cat") {
    if (argv.size() != 2)
      Usage("cat <path>");
    return world_.fs.Read(Resolve(argv[1]), uid);
  }
  if (cmd == "ls") {
    if (argv.size() > 2)
      Usage("ls [<prefix>]");
    std::string prefix = argv.size() == 2 ? Resolve(argv[1]) : Home();
    if (uid != vfs::kRootUid && !vfs::FileSystem::IsPublicPath(prefix)) {
      const vfs::AppZone* zone = world_.fs.ZoneForPath(prefix);
      if (!zone || zone->uid != uid)
        throw Error(Errc::kPermissionDenied, "ls " + prefix);
    }
    std::string out;
    for (const std::string& path : world_.fs.List(prefix))
      out += path + "\n";
    return out;
  }
  if (cmd == "cp") {
    if (argv.size() != 3)
      Usage("cp <src> <dst>");
    std::string src = Resolve(argv[1]);
    std::string dst = Resolve(argv[2]);
    if (dst.ends_with('/'))
      dst += BaseName(src);
    world_.fs.Write(dst, uid, world_.fs.Read(src, uid));
    return {};
  }
  if (cmd == "chmod") {
    if (argv.size() != 3)
      Usage("chmod <mode> <path>");
    std::optional<bool> readable = WorldReadableFromMode(argv[1]);
    if (!readable)
      Usage("chmod <a+r|o+r|a-r|o-r|octal> <path>");
    world_.fs.Chmod(Resolve(argv[2]), uid, *readable);
    return {};
  }
  if (cmd == "echo_append") {
    if (argv.size() < 3)
      Usage("echo_append <path> <text>");
    std::vector<std::string> text(argv.begin() + 2, argv.end());
    world_.fs.Append(Resolve(argv[1]), uid, JoinArgv(text) + "\n");
    return {};
  }
  if (cmd == "scp") {
    if (argv.size() != 3)
      Usage("scp <path> [user@]<host>[:<path>]");
    std::string content = world_.fs.Read(Resolve(argv[1]), uid);
    std::string host = argv[2];
    if (size_t at = host.find('@'); at != std::string::npos)
      host = host.substr(at + 1);
    host = host.substr(0, host.find(':'));
    world_.net.Post(node_, host, content);
    world_.trace.Record({"scp", node_, host,
                         std::to_string(content.size()) + " bytes"});
    return {};
  }
  if (cmd == "history") {
    if (argv.size() != 1)
      Usage("history");
    return world_.fs.Read(HistoryPath(), uid);
  }
  throw Error(Errc::kUnknownCommand, cmd);
}

CommandOutcome Interpreter::InvokeComponent(const Caller& caller,
                                            std::string_view name,
                                            const std::vector<std::string>& argv) {
  const ComponentDecl* decl = nullptr;
  for (const ComponentDecl& c : config_.components) {
    if (c.name == name)
      decl = &c;
  }
  std::string label = app_id_ + "/" + std::string(name);
  if (!decl)
    throw Error(Errc::kNotFound, "no component " + label);
  if (caller.uid != app_uid()) {
    if (!decl->exported)
      throw Error(Errc::kComponentNotExported, label);
    if (decl->required_permission &&
        !caller.permissions.contains(*decl->required_permission)) {
      throw Error(Errc::kPermissionRequired,
                  label + " needs " + *decl->required_permission);
    }
  }
  world_.trace.Record({"component-invoke", caller.actor, label, JoinArgv(argv)});
  return Execute(argv, caller.actor);
}

void Interpreter::ServeSsh() {
  if (!config_.ssh)
    return;
  auto authed = std::make_shared<std::map<net::ConnectionId, bool>>();
  net::ServiceHandlers handlers;
  handlers.greeting = [this](net::ConnectionId) {
    const ShellAuth& auth = *config_.ssh;
    if (!auth.banner_reveals_identity)
      return std::string("BANNER ssh\n");
    return "BANNER " + auth.identity + " user=" + ShellUser() + "\n";
  };
  handlers.on_request = [this, authed](net::ConnectionId conn,
                                       const net::Node& client,
                                       const std::string& request) {
    std::string_view line = request;
    if (line.ends_with('\n'))
      line.remove_suffix(1);
    std::vector<std::string> words = SplitArgv(line);
    if (words.empty())
      return std::string("ERR unknown-command\n");
    if (words[0] == "AUTH") {
      bool ok = words.size() == 3 && words[1] == ShellUser() &&
                words[2] == config_.ssh->password;
      (*authed)[conn] = ok;
      world_.trace.Record({"ssh-auth", client.id, app_id_,
                           words.size() > 1 ? words[1] + (ok ? " ok" : " fail")
                                            : "fail"});
      return std::string(ok ? "OK\n" : "FAIL\n");
    }
    if (words[0] == "CMD") {
      if (!(*authed)[conn])
        return std::string("ERR auth-failed\n");
      std::vector<std::string> argv(words.begin() + 1, words.end());
      try {
        return "OUT " + codec::Base64Encode(Execute(argv, client.id).output) + "\n";
      } catch (const Error& e) {
        return "ERR " + std::string(ErrcName(e.code())) + "\n";
      }
    }
    return std::string("ERR unknown-command\n");
  };
  world_.net.Bind(node_, config_.ssh_port, config_.ssh_background_capable,
                  /*encrypted=*/true, std::move(handlers));
}

}  // namespace ifl::cmd
