#include "ifl/harness/report.h"

#include <algorithm>
#include <sstream>

#include "ifl/base/codec.h"

namespace ifl::harness {

using nlohmann::ordered_json;

namespace {

ordered_json EventJson(const Event& e) {
  ordered_json j;
  j["kind"] = e.kind;
  j["actor"] = e.actor;
  j["url"] = e.url;
  j["decision"] = e.decision;
  j["blocking"] = e.blocking;
  j["user_visible"] = e.user_visible;
  return j;
}

ordered_json ChecksJson(const std::vector<Check>& checks) {
  ordered_json out = ordered_json::array();
  for (const Check& c : checks)
    out.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return out;
}

std::string Pad(std::string s, size_t width) {
  if (s.size() < width)
    s.append(width - s.size(), ' ');
  return s;
}

void ChecksText(std::ostringstream& out, const std::vector<Check>& checks) {
  for (const Check& c : checks)
    out << (c.pass ? "  ok   " : "  FAIL ") << c.name << " (" << c.detail << ")\n";
}

}  // namespace

ordered_json ToJson(const AttackReport& r) {
  ordered_json j;
  j["schema"] = "ifl-attack-report/1";
  j["scenario"] = r.scenario;
  j["profile"] = r.profile;
  j["toggle"] = r.toggle;
  j["seed"] = r.seed;
  ordered_json verdict;
  if (r.leak) {
    verdict["kind"] = "leak";
    verdict["targets"] = r.leaked_targets;
  } else {
    verdict["kind"] = "blocked";
    verdict["stage"] = r.blocked_stage;
  }
  j["verdict"] = verdict;
  j["cell"] = r.Cell();
  j["expected"] = r.expected ? ordered_json(*r.expected) : ordered_json();
  j["matches_expected"] = r.MatchesExpected();
  j["leaked"] = ordered_json::array();
  for (const LeakedFile& f : r.leaked) {
    j["leaked"].push_back({{"target", f.target},
                           {"path", f.path},
                           {"via", f.via},
                           {"size", f.bytes.size()},
                           {"bytes_b64", codec::Base64Encode(f.bytes)},
                           {"matches_target", f.matches_target}});
  }
  j["captures"] = ordered_json::array();
  for (const Capture& c : r.captures) {
    j["captures"].push_back({{"via", c.via},
                             {"size", c.bytes.size()},
                             {"bytes_b64", codec::Base64Encode(c.bytes)}});
  }
  j["alerts"] = ordered_json::array();
  for (const Event& e : r.Alerts())
    j["alerts"].push_back(EventJson(e));
  j["trace"] = ordered_json::array();
  for (const Event& e : r.trace)
    j["trace"].push_back(EventJson(e));
  return j;
}

ordered_json ToJson(const MatrixReport& r) {
  ordered_json j;
  j["schema"] = "ifl-matrix-report/1";
  j["toggles"] = r.toggles;
  j["rows"] = ordered_json::array();
  for (const MatrixRow& row : r.rows) {
    ordered_json cells, expected;
    for (const std::string& t : r.toggles) {
      cells[t] = row.cells.at(t);
      expected[t] = row.expected.at(t);
    }
    j["rows"].push_back({{"scenario", row.scenario},
                         {"tags", row.tags},
                         {"cells", cells},
                         {"expected", expected}});
  }
  j["checks"] = ChecksJson(r.checks);
  j["pass"] = r.pass();
  return j;
}

ordered_json ToJson(const PlatformProfile& p) {
  ordered_json j;
  j["name"] = p.name;
  j["file_opening"] =
      p.file_opening == net::FileOpening::kInApp ? "in_app" : "dedicated_app";
  j["dir_randomized"] = p.dir_randomized;
  j["interpreters_allowed"] = p.interpreters_allowed;
  j["background_servers_allowed"] = p.background_servers_allowed;
  return j;
}

ordered_json ToJson(const ProfileReport& r) {
  ordered_json j;
  j["schema"] = "ifl-profile-report/1";
  j["profiles"] = {ToJson(AndroidLike()), ToJson(IosLike())};
  j["rows"] = ordered_json::array();
  for (const ProfileRow& row : r.rows) {
    j["rows"].push_back({{"scenario", row.scenario},
                         {"implication", row.implication},
                         {"android_like", row.android_like},
                         {"ios_like", row.ios_like},
                         {"differs", row.differs()},
                         {"expected_android_like", row.expected_android_like},
                         {"expected_ios_like", row.expected_ios_like}});
  }
  j["checks"] = ChecksJson(r.checks);
  j["pass"] = r.pass();
  return j;
}

ordered_json ToJson(const SweepReport& r) {
  ordered_json j;
  j["schema"] = "ifl-intent-sweep/1";
  j["scenario"] = r.scenario;
  j["rows"] = ordered_json::array();
  for (const SweepRow& row : r.rows) {
    j["rows"].push_back({{"intent_parse_uri", row.parse_uri},
                         {"intent_component_loads_external_url",
                          row.loads_external_url},
                         {"intent_component_allows_file_js", row.allows_file_js},
                         {"cell", row.cell},
                         {"leaked", row.leaked}});
  }
  j["checks"] = ChecksJson(r.checks);
  j["pass"] = r.pass();
  return j;
}

std::string ToText(const AttackReport& r) {
  std::ostringstream out;
  out << "scenario " << r.scenario << "  profile " << r.profile << "  toggle "
      << r.toggle << "  seed " << r.seed << "\n";
  out << "verdict  " << r.Cell();
  if (r.expected)
    out << "  (expected " << *r.expected << (r.MatchesExpected() ? ", ok)" : ", MISMATCH)");
  out << "\n";
  for (const LeakedFile& f : r.leaked) {
    out << "leaked   " << f.target << " " << f.bytes.size() << " bytes via "
        << f.via << (f.matches_target ? " (byte-equal)" : " (DIFFERS)") << "\n";
  }
  std::vector<Event> alerts = r.Alerts();
  if (!alerts.empty()) {
    out << "alerts\n";
    for (const Event& e : alerts)
      out << "  " << e.kind << " " << e.actor << " " << e.decision << "\n";
  }
  out << "trace\n";
  for (size_t i = 0; i < r.trace.size(); ++i) {
    const Event& e = r.trace[i];
    out << "  " << Pad(std::to_string(i), 4) << (e.blocking ? "! " : "  ")
        << Pad(e.kind, 22) << Pad(e.actor, 18) << e.url;
    if (!e.decision.empty())
      out << "  [" << e.decision << "]";
    out << "\n";
  }
  return out.str();
}

std::string ToText(const MatrixReport& r) {
  auto mark = [](const MatrixRow& row, const std::string& t) {
    const std::string& cell = row.cells.at(t);
    std::string m = cell.starts_with("leak(") ? "LEAK" : cell.substr(8, cell.size() - 9);
    return cell == row.expected.at(t) ? m : m + "*";
  };
  size_t name_width = 8;
  std::vector<size_t> widths;
  for (const std::string& t : r.toggles)
    widths.push_back(t.size());
  for (const MatrixRow& row : r.rows) {
    name_width = std::max(name_width, row.scenario.size());
    for (size_t i = 0; i < r.toggles.size(); ++i)
      widths[i] = std::max(widths[i], mark(row, r.toggles[i]).size());
  }
  std::ostringstream out;
  out << Pad("scenario", name_width + 2);
  for (size_t i = 0; i < r.toggles.size(); ++i)
    out << Pad(r.toggles[i], widths[i] + 2);
  out << "\n";
  for (const MatrixRow& row : r.rows) {
    out << Pad(row.scenario, name_width + 2);
    for (size_t i = 0; i < r.toggles.size(); ++i)
      out << Pad(mark(row, r.toggles[i]), widths[i] + 2);
    out << "\n";
  }
  out << "checks\n";
  ChecksText(out, r.checks);
  out << (r.pass() ? "matrix PASS\n" : "matrix FAIL\n");
  return out.str();
}

std::string ToText(const ProfileReport& r) {
  std::ostringstream out;
  for (const PlatformProfile* p : {&AndroidLike(), &IosLike()}) {
    out << p->name << ": file_opening="
        << (p->file_opening == net::FileOpening::kInApp ? "in_app" : "dedicated_app")
        << " dir_randomized=" << p->dir_randomized
        << " interpreters_allowed=" << p->interpreters_allowed
        << " background_servers_allowed=" << p->background_servers_allowed << "\n";
  }
  out << "\n";
  size_t name_w = 0, cell_w = 0;
  for (const ProfileRow& row : r.rows) {
    name_w = std::max(name_w, row.scenario.size());
    cell_w = std::max(cell_w, row.android_like.size());
  }
  for (const ProfileRow& row : r.rows) {
    out << Pad(row.scenario, name_w + 2) << "impl " << row.implication << "  "
        << Pad(row.android_like, cell_w + 2) << row.ios_like
        << (row.differs() ? "  <- differs" : "") << "\n";
  }
  out << "checks\n";
  ChecksText(out, r.checks);
  out << (r.pass() ? "profiles PASS\n" : "profiles FAIL\n");
  return out.str();
}

std::string ToText(const SweepReport& r) {
  std::ostringstream out;
  out << "intent sweep over " << r.scenario << "\n";
  for (const SweepRow& row : r.rows) {
    out << "  parse=" << row.parse_uri << " external=" << row.loads_external_url
        << " file_js=" << row.allows_file_js << "  " << row.cell << "\n";
  }
  ChecksText(out, r.checks);
  out << (r.pass() ? "sweep PASS\n" : "sweep FAIL\n");
  return out.str();
}

}  // namespace ifl::harness
