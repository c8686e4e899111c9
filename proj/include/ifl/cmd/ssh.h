#ifndef IFL_CMD_SSH_H_
#define IFL_CMD_SSH_H_

#include <string>
#include <vector>

#include "ifl/net/network.h"
#include "ifl/world/world.h"

namespace ifl::cmd {

// Client side of the line protocol served by Interpreter::ServeSsh:
//   server: BANNER <identity> user=<name>
//   client: AUTH <user> <pass>      server: OK | FAIL
//   client: CMD <argv...>           server: OUT <base64> | ERR <error-name>
class SshClient {
 public:
  // Connects immediately. Errors are those of Network::Connect.
  SshClient(World& world, std::string actor, const std::string& host,
            int port = 22);

  const std::string& banner() const { return banner_; }
  // Throws Error(kAuthFailed).
  void Login(const std::string& user, const std::string& password);
  // Throws Error with the server-reported code.
  std::string Run(const std::vector<std::string>& argv);

 private:
  World& world_;
  std::string actor_;
  net::Connection conn_;
  std::string banner_;
};

// Pre-auth probe: connects and returns the banner line without credentials.
std::string ProbeBanner(World& world, const std::string& actor,
                        const std::string& host, int port = 22);

}  // namespace ifl::cmd

#endif  // IFL_CMD_SSH_H_
