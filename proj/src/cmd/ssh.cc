#include "ifl/cmd/ssh.h"

#include "ifl/base/codec.h"
#include "ifl/base/error.h"
#include "ifl/cmd/interpreter.h"

namespace ifl::cmd {

namespace {

std::string StripNewline(std::string s) {
  if (!s.empty() && s.back() == '\n')
    s.pop_back();
  return s;
}

}  // namespace

SshClient::SshClient(World& world, std::string actor, const std::string& host,
                     int port)
    : world_(world), actor_(std::move(actor)) {
  conn_ = world_.net.Connect(actor_, host, port);
  banner_ = StripNewline(conn_.greeting);
}

void SshClient::Login(const std::string& user, const std::string& password) {
  std::string reply =
      world_.net.Request(conn_.id, "AUTH " + user + " " + password + "\n");
  if (StripNewline(reply) != "OK")
    throw Error(Errc::kAuthFailed, user + "@" + banner_);
}

std::string SshClient::Run(const std::vector<std::string>& argv) {
  std::string reply =
      StripNewline(world_.net.Request(conn_.id, "CMD " + JoinArgv(argv) + "\n"));
  if (reply.starts_with("OUT ")) {
    if (auto bytes = codec::Base64Decode(reply.substr(4)))
      return *bytes;
    throw Error(Errc::kUnreachable, "garbled ssh output");
  }
  if (reply.starts_with("ERR ")) {
    std::string name = reply.substr(4);
    throw Error(ParseErrc(name).value_or(Errc::kUnknownCommand),
                "remote: " + JoinArgv(argv));
  }
  throw Error(Errc::kUnreachable, "unexpected ssh reply: " + reply);
}

std::string ProbeBanner(World& world, const std::string& actor,
                        const std::string& host, int port) {
  SshClient client(world, actor, host, port);
  world.trace.Record({"ssh-banner", actor, host, client.banner()});
  return client.banner();
}

}  // namespace ifl::cmd
