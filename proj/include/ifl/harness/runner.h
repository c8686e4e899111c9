#ifndef IFL_HARNESS_RUNNER_H_
#define IFL_HARNESS_RUNNER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifl/base/trace.h"
#include "ifl/harness/scenario.h"

namespace ifl::harness {

enum class Toggle {
  kBaseline,
  kEnhancedSop,
  kNoJs,
  kAuthAccess,
  kDirRandomized,
  kPerRequestToken,
  kPerConnectionConfirm,
  kPhotosOnly,
};

// In matrix column order.
const std::vector<Toggle>& AllToggles();
std::string_view ToggleName(Toggle toggle);
std::optional<Toggle> ParseToggle(std::string_view name);

// Scenario tags a mitigation is meant to stop. Empty for kBaseline.
const std::vector<std::string>& DesignatedTags(Toggle toggle);
bool IsDesignated(const Scenario& scenario, Toggle toggle);

// The scenario with one mitigation switched on everywhere it applies.
Scenario ApplyToggle(Scenario scenario, Toggle toggle);

struct LeakedFile {
  // "<app>:<relative path>".
  std::string target;
  std::string path;
  std::string via;
  std::string bytes;
  // Byte equality with the file as it stands when the run ends.
  bool matches_target = false;
};

// Bytes that reached the adversary: downloads, reads, shell output and
// exfiltrated messages.
struct Capture {
  std::string via;
  std::string bytes;
};

struct AttackReport {
  std::string scenario;
  uint64_t seed = 0;
  std::string profile;
  std::string toggle;
  bool leak = false;
  // Target labels in declaration order; set when |leak|.
  std::vector<std::string> leaked_targets;
  // First blocking event, or "no-leak"; set when !|leak|.
  std::string blocked_stage;
  std::vector<LeakedFile> leaked;
  std::vector<Capture> captures;
  std::vector<Event> trace;
  std::optional<std::string> expected;

  // "leak(t1,t2)" or "blocked(stage)".
  std::string Cell() const;
  std::vector<Event> Alerts() const;
  bool MatchesExpected() const { return expected && *expected == Cell(); }
};

struct RunOptions {
  // Overrides the scenario's own seed (default 1).
  std::optional<uint64_t> seed;
  Toggle toggle = Toggle::kBaseline;
  // Replaces the scenario's profile; the expected cell then comes from its
  // family entry.
  std::optional<PlatformProfile> profile;
};

// Builds a fresh world, runs every step and judges the outcome. A failing
// step is recorded as a blocking event named after the error and the run
// goes on. Deterministic for a given (scenario, options).
AttackReport RunScenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace ifl::harness

#endif  // IFL_HARNESS_RUNNER_H_
