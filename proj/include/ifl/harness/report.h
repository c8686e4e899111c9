#ifndef IFL_HARNESS_REPORT_H_
#define IFL_HARNESS_REPORT_H_

#include <string>

#include "ifl/harness/matrix.h"
#include "ifl/harness/runner.h"
#include "ifl/harness/scenario.h"
#include "json.hpp"

namespace ifl::harness {

// Key order is fixed, so equal reports serialize to equal bytes. The
// layouts are documented in README.md.
nlohmann::ordered_json ToJson(const AttackReport& report);
nlohmann::ordered_json ToJson(const MatrixReport& report);
nlohmann::ordered_json ToJson(const ProfileReport& report);
nlohmann::ordered_json ToJson(const SweepReport& report);
nlohmann::ordered_json ToJson(const PlatformProfile& profile);

std::string ToText(const AttackReport& report);
std::string ToText(const MatrixReport& report);
std::string ToText(const ProfileReport& report);
std::string ToText(const SweepReport& report);

}  // namespace ifl::harness

#endif  // IFL_HARNESS_REPORT_H_
