// Command-line front end for the scenario catalog and the mitigation matrix.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ifl/base/error.h"
#include "ifl/harness/matrix.h"
#include "ifl/harness/report.h"
#include "ifl/harness/runner.h"
#include "ifl/harness/scenario.h"

namespace {

using namespace ifl::harness;

ifl::harness::Scenario Resolve(const std::string& name_or_file) {
  if (const Scenario* s = FindScenario(name_or_file))
    return *s;
  if (std::filesystem::exists(name_or_file))
    return LoadScenarioFile(name_or_file);
  throw ifl::Error(ifl::Errc::kNotFound,
                   "no catalog scenario or file named '" + name_or_file + "'");
}

template <typename Report>
void Emit(const Report& report, const std::string& format) {
  if (format == "json")
    std::cout << ToJson(report).dump(2) << "\n";
  else
    std::cout << ToText(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indirect file leak simulator"};
  app.require_subcommand(1);

  std::string format = "text";
  auto add_report = [&](CLI::App* cmd) {
    cmd->add_option("--report", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  std::string target;
  std::optional<uint64_t> seed;
  std::string toggle = "baseline";
  std::string profile;
  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", target, "Catalog name or scenario file")->required();
  run->add_option("--seed", seed, "World seed");
  run->add_option("--toggle", toggle, "Mitigation to switch on");
  run->add_option("--profile", profile, "Override the platform profile")
      ->check(CLI::IsMember({"android_like", "ios_like"}));
  add_report(run);

  CLI::App* matrix = app.add_subcommand("matrix", "Run the attack x mitigation matrix");
  matrix->add_option("--seed", seed, "World seed for every cell");
  add_report(matrix);

  CLI::App* list = app.add_subcommand("list", "List catalog scenarios");

  CLI::App* profiles =
      app.add_subcommand("profiles", "Show platform profiles and their differentials");
  add_report(profiles);

  std::string sweep_app;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a scenario under all eight intent:// precondition settings");
  sweep->add_option("scenario", target, "Catalog name or scenario file")->required();
  sweep->add_option("--app", sweep_app, "Browser app to vary")->required();
  add_report(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      std::optional<Toggle> t = ParseToggle(toggle);
      if (!t) {
        std::cerr << "unknown toggle '" << toggle << "'\n";
        return 2;
      }
      RunOptions options{seed, *t, std::nullopt};
      if (!profile.empty())
        options.profile = ProfileByName(profile);
      AttackReport report = RunScenario(Resolve(target), options);
      Emit(report, format);
      return report.expected && !report.MatchesExpected() ? 1 : 0;
    }
    if (matrix->parsed()) {
      MatrixReport report = RunMatrix(Catalog(), seed);
      Emit(report, format);
      return report.pass() ? 0 : 1;
    }
    if (list->parsed()) {
      for (const Scenario& s : Catalog()) {
        std::string tags;
        for (const std::string& tag : s.tags)
          tags += (tags.empty() ? "" : ",") + tag;
        std::cout << s.name << "\t" << s.profile.name << "\t" << tags << "\t"
                  << s.expected.at("baseline") << "\n";
      }
      return 0;
    }
    if (profiles->parsed()) {
      ProfileReport report = CompareProfiles(ProfileFamily());
      Emit(report, format);
      return report.pass() ? 0 : 1;
    }
    if (sweep->parsed()) {
      SweepReport report = IntentSweep(Resolve(target), sweep_app);
      Emit(report, format);
      return report.pass() ? 0 : 1;
    }
  } catch (const ifl::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
