#include "ifl/harness/matrix.h"

#include "ifl/base/error.h"

namespace ifl::harness {

namespace {

bool IsLeak(const std::string& cell) { return cell.starts_with("leak("); }

std::string Cite(const std::string& scenario, const std::string& toggle,
                 const std::string& cell) {
  return scenario + "/" + toggle + "=" + cell;
}

Check Summarize(std::string name, const std::vector<std::string>& failures,
                const std::string& ok_detail) {
  Check c{std::move(name), failures.empty(), ok_detail};
  if (!failures.empty()) {
    c.detail.clear();
    for (const std::string& f : failures)
      c.detail += (c.detail.empty() ? "" : "; ") + f;
  }
  return c;
}

bool HasClass(const std::vector<std::string>& tags, const std::string& cls) {
  for (const std::string& tag : tags) {
    if (tag.starts_with(cls))
      return true;
  }
  return false;
}

}  // namespace

bool AllPass(const std::vector<Check>& checks) {
  for (const Check& c : checks) {
    if (!c.pass)
      return false;
  }
  return true;
}

const std::vector<std::string>& AttackClasses() {
  static const std::vector<std::string> classes = {"sopIFL", "aimIFL", "cmdIFL",
                                                   "serverIFL"};
  return classes;
}

MatrixReport RunMatrix(const std::vector<Scenario>& scenarios,
                       std::optional<uint64_t> seed) {
  MatrixReport report;
  for (Toggle t : AllToggles())
    report.toggles.emplace_back(ToggleName(t));

  std::vector<std::string> mismatches, unspecific, ineffective;
  std::map<std::string, int> flips;
  std::map<std::string, std::vector<std::string>> class_witness;
  for (const Scenario& s : scenarios) {
    MatrixRow row;
    row.scenario = s.name;
    row.tags = s.tags;
    for (Toggle t : AllToggles()) {
      AttackReport r = RunScenario(s, {seed, t, std::nullopt});
      std::string name(ToggleName(t));
      row.cells[name] = r.Cell();
      row.expected[name] = r.expected.value_or("");
      if (!r.MatchesExpected())
        mismatches.push_back(Cite(s.name, name, r.Cell()) + " expected " +
                             row.expected[name]);
    }
    const std::string& base = row.cells.at("baseline");
    for (Toggle t : AllToggles()) {
      if (t == Toggle::kBaseline)
        continue;
      std::string name(ToggleName(t));
      const std::string& cell = row.cells.at(name);
      if (!IsDesignated(s, t)) {
        if (cell != base)
          unspecific.push_back(Cite(s.name, name, cell) + " baseline " + base);
        continue;
      }
      if (!IsLeak(base))
        continue;
      if (IsLeak(cell)) {
        ineffective.push_back(Cite(s.name, name, cell));
        continue;
      }
      ++flips[name];
      for (const std::string& cls : AttackClasses()) {
        if (HasClass(s.tags, cls))
          class_witness[cls].push_back(s.name + " by " + name);
      }
    }
    report.rows.push_back(std::move(row));
  }

  report.checks.push_back(Summarize("cells match the catalog", mismatches,
                                    std::to_string(scenarios.size() *
                                                   AllToggles().size()) +
                                        " cells"));
  report.checks.push_back(Summarize("mitigation specificity", unspecific,
                                    "no non-designated cell changed"));
  report.checks.push_back(Summarize("designated mitigations block", ineffective,
                                    "every designated baseline leak is blocked"));
  for (Toggle t : AllToggles()) {
    if (t == Toggle::kBaseline)
      continue;
    std::string name(ToggleName(t));
    int n = flips.contains(name) ? flips.at(name) : 0;
    report.checks.push_back({"toggle " + name + " blocks a leak", n > 0,
                             std::to_string(n) + " leak(s) blocked"});
  }
  for (const std::string& cls : AttackClasses()) {
    const auto& w = class_witness[cls];
    report.checks.push_back({"class " + cls + " leaks and is mitigated",
                             !w.empty(), w.empty() ? "no witness" : w.front()});
  }
  return report;
}

std::vector<Scenario> ProfileFamily() {
  std::vector<Scenario> out;
  for (const Scenario& s : Catalog()) {
    if (s.family)
      out.push_back(s);
  }
  return out;
}

ProfileReport CompareProfiles(const std::vector<Scenario>& family) {
  ProfileReport report;
  std::vector<std::string> mismatches;
  std::map<int, std::vector<std::string>> differing;
  for (const Scenario& s : family) {
    if (!s.family)
      throw Error(Errc::kScenarioInvalid, s.name + ": no family entry");
    ProfileRow row;
    row.scenario = s.name;
    row.implication = s.family->implication;
    row.expected_android_like = s.family->android_like;
    row.expected_ios_like = s.family->ios_like;
    row.android_like =
        RunScenario(s, {std::nullopt, Toggle::kBaseline, AndroidLike()}).Cell();
    row.ios_like =
        RunScenario(s, {std::nullopt, Toggle::kBaseline, IosLike()}).Cell();
    if (row.android_like != row.expected_android_like)
      mismatches.push_back(s.name + " android_like=" + row.android_like);
    if (row.ios_like != row.expected_ios_like)
      mismatches.push_back(s.name + " ios_like=" + row.ios_like);
    if (row.differs())
      differing[row.implication].push_back(s.name);
    report.rows.push_back(std::move(row));
  }
  report.checks.push_back(
      Summarize("profile cells match the catalog", mismatches,
                std::to_string(family.size() * 2) + " cells"));
  size_t total = 0;
  for (const auto& [imp, names] : differing)
    total += names.size();
  for (int imp = 1; imp <= 4; ++imp) {
    size_t n = differing.contains(imp) ? differing.at(imp).size() : 0;
    report.checks.push_back({"implication " + std::to_string(imp) + " differs",
                             n == 1, std::to_string(n) + " differing row(s)"});
  }
  bool controls_equal = !differing.contains(0);
  report.checks.push_back({"controls agree", controls_equal,
                           controls_equal ? "no control row differs"
                                          : differing.at(0).front()});
  report.checks.push_back({"exactly four differences", total == 4,
                           std::to_string(total) + " differing row(s)"});
  return report;
}

SweepReport IntentSweep(const Scenario& scenario, const std::string& app) {
  if (!scenario.FindApp(app) || !scenario.FindApp(app)->browser)
    throw Error(Errc::kScenarioInvalid, app + " has no browser in " + scenario.name);
  SweepReport report;
  report.scenario = scenario.name;
  std::vector<std::string> wrong;
  for (int bits = 0; bits < 8; ++bits) {
    Scenario s = scenario;
    web::RenderConfig& c = *s.FindApp(app)->browser;
    c.intent_parse_uri = bits & 4;
    c.intent_component_loads_external_url = bits & 2;
    c.intent_component_allows_file_js = bits & 1;
    AttackReport r = RunScenario(s);
    SweepRow row{c.intent_parse_uri, c.intent_component_loads_external_url,
                 c.intent_component_allows_file_js, r.Cell(), r.leak};
    bool oracle = bits == 7;
    if (row.leaked != oracle)
      wrong.push_back(std::to_string(bits >> 2 & 1) + std::to_string(bits >> 1 & 1) +
                      std::to_string(bits & 1) + "=" + row.cell);
    report.rows.push_back(std::move(row));
  }
  report.checks.push_back(
      Summarize("leaks iff all three preconditions hold", wrong, "8 of 8 rows"));
  return report;
}

}  // namespace ifl::harness
