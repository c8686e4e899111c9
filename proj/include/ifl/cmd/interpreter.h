#ifndef IFL_CMD_INTERPRETER_H_
#define IFL_CMD_INTERPRETER_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ifl/world/world.h"

namespace ifl::cmd {

struct ComponentDecl {
  std::string name;
  bool exported = true;
  std::optional<std::string> required_permission;
};

struct ShellAuth {
  std::string password = "admin";
  std::string identity = "SSHDroid";
  bool banner_reveals_identity = true;
};

struct InterpreterConfig {
  std::vector<ComponentDecl> components;
  // Asks for root; granted only on a rooted device.
  bool tries_root = false;
  // Line-protocol shell server, absent for UI-only interpreters.
  std::optional<ShellAuth> ssh;
  int ssh_port = 22;
  bool ssh_background_capable = true;
  // Relative to the app's base_dir.
  std::string history_file = ".bash_history";
};

// Another app calling into an exported component.
struct Caller {
  std::string actor;
  int uid = -1;
  std::set<std::string> permissions;
};

struct CommandOutcome {
  std::string output;
};

// Whitespace split and join; argv tokens never contain whitespace except
// the trailing text of echo_append.
std::vector<std::string> SplitArgv(std::string_view line);
std::string JoinArgv(const std::vector<std::string>& argv);

// Closed command set over the vfs, run with the hosting app's identity (or
// uid 0 when rooted):
//   cat <path>                ls [<prefix>]
//   cp <src> <dst>            chmod <a+r|o+r|a-r|o-r|octal> <path>
//   echo_append <path> <text> scp <path> [user@]<host>[:<path>]
//   history
// Relative paths resolve against the app's base_dir. Every command line is
// appended to the history file before it runs.
class Interpreter {
 public:
  Interpreter(World& world, std::string app_id, std::string node_id,
              InterpreterConfig config);

  // |requester| names who asked, for grant prompts and the trace.
  // Errors: kUnknownCommand, plus whatever the vfs or net raises; under
  // auth_access, kPermissionDenied when the user declines.
  CommandOutcome Execute(const std::vector<std::string>& argv,
                         const std::string& requester);

  // Errors: kNotFound (no such component), kComponentNotExported,
  // kPermissionRequired.
  CommandOutcome InvokeComponent(const Caller& caller, std::string_view name,
                                 const std::vector<std::string>& argv);

  // Binds the ssh port on the device when configured.
  void ServeSsh();

  bool runs_as_root() const;
  int effective_uid() const;
  // "root" on a rooted device, "user" otherwise.
  std::string ShellUser() const;
  std::string Home() const;
  std::string HistoryPath() const;
  std::string Resolve(std::string_view path) const;

  const std::string& app_id() const { return app_id_; }
  const std::string& node_id() const { return node_; }
  const InterpreterConfig& config() const { return config_; }

 private:
  std::string Run(const std::vector<std::string>& argv);
  void RequireGrant(const std::vector<std::string>& argv,
                    const std::string& requester);
  int app_uid() const;

  World& world_;
  std::string app_id_;
  std::string node_;
  InterpreterConfig config_;
};

}  // namespace ifl::cmd

#endif  // IFL_CMD_INTERPRETER_H_
