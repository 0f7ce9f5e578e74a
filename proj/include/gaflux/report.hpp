#pragma once

#include <string>
#include <vector>

namespace gaflux::report {

struct CheckResult {
  std::string name;
  std::string expected;
  std::string computed;
  double tolerance = 0.0;
  bool pass = false;
};

CheckResult make_check(const std::string& name, double expected, double computed,
                       double tolerance);

// Per-run record: echoed config, per-check results, wall clock, version.
// Overall status fails iff any check fails.
struct RunReport {
  std::string command;
  std::string version;
  std::string config_json;  // merged config echo
  std::vector<CheckResult> checks;
  double wall_ms = 0.0;

  bool pass() const;
  std::string to_json() const;
  // one aligned human-readable line per check
  std::string to_table() const;
};

void save_report(const std::string& path, const RunReport& r);

extern const char* kVersion;

}  // namespace gaflux::report
