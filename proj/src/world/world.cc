#include "ifl/world/world.h"

namespace ifl {

World::World(uint64_t seed) : seed(seed), rng(seed), net(trace) {}

bool World::AskUser(const std::string& actor, const std::string& what) {
  trace.Record({"grant-request", actor, what, "", false, true});
  bool granted = user_grants && user_grants(actor, what);
  trace.Record({granted ? "user-grant" : "user-decline", actor, what, ""});
  return granted;
}

void World::AddLoot(std::string via, std::string bytes) {
  trace.Record({"loot", via, "", std::to_string(bytes.size()) + " bytes"});
  loot.push_back({std::move(via), std::move(bytes)});
}

std::string World::RandomToken(size_t hex_chars) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  while (out.size() < hex_chars) {
    uint64_t word = rng();
    for (int i = 0; i < 16 && out.size() < hex_chars; ++i, word >>= 4)
      out.push_back(kHex[word & 0xF]);
  }
  return out;
}

}  // namespace ifl
