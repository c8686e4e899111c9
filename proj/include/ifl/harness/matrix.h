#ifndef IFL_HARNESS_MATRIX_H_
#define IFL_HARNESS_MATRIX_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ifl/harness/runner.h"
#include "ifl/harness/scenario.h"

namespace ifl::harness {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

bool AllPass(const std::vector<Check>& checks);

struct MatrixRow {
  std::string scenario;
  std::vector<std::string> tags;
  // Toggle name -> cell.
  std::map<std::string, std::string> cells;
  std::map<std::string, std::string> expected;
};

struct MatrixReport {
  std::vector<std::string> toggles;
  std::vector<MatrixRow> rows;
  std::vector<Check> checks;

  bool pass() const { return AllPass(checks); }
};

// Runs every scenario under every toggle and checks:
//   - each cell equals the catalog's expectation;
//   - a toggle leaves every non-designated scenario at its baseline cell;
//   - a toggle blocks every designated scenario that leaks at baseline;
//   - each toggle blocks at least one designated baseline leak;
//   - each attack class has a scenario that leaks at baseline and is
//     blocked by one of its designated toggles.
MatrixReport RunMatrix(const std::vector<Scenario>& scenarios,
                       std::optional<uint64_t> seed = std::nullopt);

// The four attack classes, as tag prefixes.
const std::vector<std::string>& AttackClasses();

struct ProfileRow {
  std::string scenario;
  int implication = 0;
  std::string android_like;
  std::string ios_like;
  std::string expected_android_like;
  std::string expected_ios_like;

  bool differs() const { return android_like != ios_like; }
};

struct ProfileReport {
  std::vector<ProfileRow> rows;
  std::vector<Check> checks;

  bool pass() const { return AllPass(checks); }
};

// Catalog scenarios that carry a family entry, in catalog order.
std::vector<Scenario> ProfileFamily();

// Runs each scenario under both shipped profiles. Passes when every cell is
// as expected and the differing rows are exactly one per implication 1-4.
ProfileReport CompareProfiles(const std::vector<Scenario>& family);

struct SweepRow {
  bool parse_uri = false;
  bool loads_external_url = false;
  bool allows_file_js = false;
  std::string cell;
  bool leaked = false;
};

struct SweepReport {
  std::string scenario;
  std::vector<SweepRow> rows;
  std::vector<Check> checks;

  bool pass() const { return AllPass(checks); }
};

// Runs |scenario| once per combination of the three intent:// preconditions
// on |app|'s browser. Passes when it leaks exactly in the all-true row.
SweepReport IntentSweep(const Scenario& scenario, const std::string& app);

}  // namespace ifl::harness

#endif  // IFL_HARNESS_MATRIX_H_
