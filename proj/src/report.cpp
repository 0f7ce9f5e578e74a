#include "gaflux/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gaflux::report {

const char* kVersion = "gaflux 0.1.0";

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
}  // namespace

CheckResult make_check(const std::string& name, double expected, double computed,
                       double tolerance) {
  CheckResult c;
  c.name = name;
  c.expected = fmt(expected);
  c.computed = fmt(computed);
  c.tolerance = tolerance;
  c.pass = std::abs(computed - expected) <= tolerance;
  return c;
}

bool RunReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = version;
  j["config"] = config_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(config_json);
  j["wall_ms"] = wall_ms;
  j["pass"] = pass();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"expected", c.expected},
                   {"computed", c.computed},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}});
  }
  j["checks"] = arr;
  return j.dump(2);
}

std::string RunReport::to_table() const {
  std::string out;
  for (const auto& c : checks) {
    out += c.pass ? "[PASS] " : "[FAIL] ";
    out += c.name;
    out += ": computed " + c.computed + ", expected " + c.expected;
    if (c.tolerance > 0) out += " (tol " + fmt(c.tolerance) + ")";
    out += "\n";
  }
  return out;
}

void save_report(const std::string& path, const RunReport& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_report: cannot open " + path);
  out << r.to_json() << '\n';
}

}  // namespace gaflux::report
