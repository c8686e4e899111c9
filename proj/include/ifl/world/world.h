#ifndef IFL_WORLD_WORLD_H_
#define IFL_WORLD_WORLD_H_

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ifl/base/trace.h"
#include "ifl/net/network.h"
#include "ifl/vfs/file_system.h"

namespace ifl {

// Bytes that ended up in the adversary's hands, tagged with the channel.
struct Loot {
  std::string via;
  std::string bytes;
};

// One simulated device plus its surroundings. Every deputy operates on a
// World; nothing is global.
struct World {
  explicit World(uint64_t seed);
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  // Shows a grant prompt to the device user and records the answer. Without
  // a |user_grants| hook the user declines.
  bool AskUser(const std::string& actor, const std::string& what);

  void AddLoot(std::string via, std::string bytes);

  // Fresh opaque token drawn from the seeded stream.
  std::string RandomToken(size_t hex_chars);

  uint64_t seed;
  std::mt19937_64 rng;
  Trace trace;
  vfs::FileSystem fs;
  net::Network net;

  bool device_rooted = false;
  // Per-request user grant for interpreter commands touching private zones.
  bool auth_access = false;
  std::function<bool(const std::string& actor, const std::string& what)>
      user_grants;

  std::vector<Loot> loot;
};

}  // namespace ifl

#endif  // IFL_WORLD_WORLD_H_
